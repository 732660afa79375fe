#!/usr/bin/env python3
"""Generate a reference table of nontrivial zeta zeros with zeta'(rho) values.

Produces the CSV consumed by `zetacorr zerosums` / `zetacorr reconstruct`:

    index,gamma,zeta_prime_re,zeta_prime_im

Method: Gram points from the exact theta function (scipy loggamma), Z(t)
evaluated with mpmath's double-precision Riemann-Siegel implementation,
zero separation by Rosser blocks (no rule violations occur this low), roots
by Brent bracketing, and zeta'(rho) = -i * exp(-i*theta(gamma)) * Z'(gamma).
The first `--head` zeros and any zero with unusually small |Z'| are polished
with one arbitrary-precision Newton step and an arbitrary-precision zeta'.

Every stage checkpoints into --workdir so an interrupted run resumes.
Accuracy of a random sample is measured against arbitrary precision and
written to the JSON report next to the output CSV.
"""

import argparse
import gzip
import json
import math
import os
import sys
import time

import numpy as np
import mpmath
from mpmath import fp, mp
from scipy.optimize import brentq
from scipy.special import digamma, lambertw, loggamma

TWO_PI = 2.0 * math.pi


def theta(t):
    """Riemann-Siegel theta, exact to double precision (t may be an array)."""
    t = np.asarray(t, dtype=float)
    return loggamma(0.25 + 0.5j * t).imag - 0.5 * t * np.log(np.pi)


def theta_deriv(t):
    t = np.asarray(t, dtype=float)
    return 0.5 * digamma(0.25 + 0.5j * t).real - 0.5 * math.log(math.pi)


def gram_points(n_max):
    """Gram points g_n for n = -1 .. n_max, solved by Newton on theta."""
    n = np.arange(-1, n_max + 1, dtype=float)
    c = n + 0.125
    # seed from the asymptotic inversion x*(ln x - 1) = c, x = g/(2*pi)
    seed = TWO_PI * c / lambertw(np.maximum(c, 0.5) / math.e).real
    g = np.maximum(seed, 9.0)
    target = n * math.pi
    for _ in range(8):
        g = g - (theta(g) - target) / theta_deriv(g)
    resid = np.max(np.abs(theta(g) - target))
    assert resid < 1e-9, f"gram newton residual {resid:g}"
    return g


def z_many(ts, label, every=20000):
    out = np.empty(len(ts))
    t0 = time.time()
    for i, t in enumerate(ts):
        out[i] = fp.siegelz(float(t))
        if every and (i + 1) % every == 0:
            rate = (i + 1) / (time.time() - t0)
            print(f"  {label}: {i+1}/{len(ts)} ({rate:.0f}/s)", flush=True)
    return out


def separate_block(g_lo, g_hi, count):
    """Return `count` sign-change brackets for Z inside (g_lo, g_hi)."""
    for depth in range(8):
        m = (1 << depth) * count + 1
        ts = np.linspace(g_lo, g_hi, m + 1)
        zs = np.array([fp.siegelz(float(t)) for t in ts])
        sgn = np.sign(zs)
        idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
        if len(idx) == count:
            return [(ts[i], ts[i + 1]) for i in idx]
        if len(idx) > count:
            raise RuntimeError(
                f"block ({g_lo:.6f},{g_hi:.6f}) expected {count} zeros, found {len(idx)}"
            )
    raise RuntimeError(f"block ({g_lo:.6f},{g_hi:.6f}) unresolved at max depth")


def stage(path):
    return os.path.exists(path)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100000)
    ap.add_argument("--out", default="data/zeros_100k.csv")
    ap.add_argument("--workdir", default="/root/zero_work")
    ap.add_argument("--head", type=int, default=1000,
                    help="zeros refined with arbitrary-precision Newton")
    ap.add_argument("--sample", type=int, default=120,
                    help="random zeros checked against arbitrary precision")
    ap.add_argument("--gzip", action="store_true", help="also write .gz")
    args = ap.parse_args()
    os.makedirs(args.workdir, exist_ok=True)
    wd = args.workdir

    # ---- stage 1: Gram points ------------------------------------------
    gram_file = os.path.join(wd, "gram.npy")
    n_gram = args.count + 60
    if not stage(gram_file):
        t0 = time.time()
        g = gram_points(n_gram)
        np.save(gram_file, g)
        print(f"[1] gram points: {len(g)} in {time.time()-t0:.1f}s", flush=True)
    g = np.load(gram_file)  # g[i] is Gram point index i-1

    # ---- stage 2: Z at Gram points -------------------------------------
    zg_file = os.path.join(wd, "zgram.npy")
    if not stage(zg_file):
        t0 = time.time()
        zg = z_many(g, "Z(gram)")
        np.save(zg_file, zg)
        print(f"[2] Z at gram points in {time.time()-t0:.1f}s", flush=True)
    zg = np.load(zg_file)

    # ---- stage 3: Rosser blocks + brackets ------------------------------
    br_file = os.path.join(wd, "brackets.npy")
    if not stage(br_file):
        t0 = time.time()
        n_idx = np.arange(-1, n_gram + 1)
        parity = np.where(n_idx % 2 == 0, 1.0, -1.0)
        good = (parity * zg) > 1e-8
        if not good[0]:
            raise RuntimeError("anchor gram point g_{-1} is not good")
        good_pos = np.nonzero(good)[0]
        brackets = []
        resolved_upto = 0  # zeros found below g[good_pos[j]]
        for a, b in zip(good_pos[:-1], good_pos[1:]):
            L = b - a
            if L == 1:
                brackets.append((g[a], g[b]))
            else:
                brackets.extend(separate_block(g[a], g[b], L))
            resolved_upto += L
        if len(brackets) < args.count + 1:
            raise RuntimeError("not enough brackets; increase gram range")
        np.save(br_file, np.array(brackets[: args.count + 1]))
        n_long = int(np.sum(np.diff(good_pos) > 1))
        print(f"[3] {len(brackets)} brackets ({n_long} multi-interval blocks) "
              f"in {time.time()-t0:.1f}s", flush=True)
    brackets = np.load(br_file)

    # ---- stage 4: roots --------------------------------------------------
    gam_file = os.path.join(wd, "gammas.npy")
    if not stage(gam_file):
        t0 = time.time()
        f = lambda t: fp.siegelz(t)
        gammas = np.empty(len(brackets))
        for i, (a, b) in enumerate(brackets):
            gammas[i] = brentq(f, a, b, xtol=1e-12, rtol=8.9e-16)
            if (i + 1) % 10000 == 0:
                rate = (i + 1) / (time.time() - t0)
                print(f"  roots: {i+1}/{len(brackets)} ({rate:.0f}/s)", flush=True)
        np.save(gam_file, gammas)
        print(f"[4] roots in {time.time()-t0:.1f}s", flush=True)
    gammas = np.load(gam_file)

    # ---- stage 5: Z'(gamma) and zeta'(rho) ------------------------------
    zd_file = os.path.join(wd, "zderiv.npy")
    if not stage(zd_file):
        t0 = time.time()
        zd = np.empty(len(gammas))
        for i, t in enumerate(gammas):
            zd[i] = fp.siegelz(float(t), derivative=1)
            if (i + 1) % 20000 == 0:
                rate = (i + 1) / (time.time() - t0)
                print(f"  Z': {i+1}/{len(gammas)} ({rate:.0f}/s)", flush=True)
        np.save(zd_file, zd)
        print(f"[5] Z' in {time.time()-t0:.1f}s", flush=True)
    zd = np.load(zd_file)
    zprime = -1j * np.exp(-1j * theta(gammas)) * zd

    # ---- stage 6: arbitrary-precision polish ----------------------------
    pol_file = os.path.join(wd, "polished.npz")
    if not stage(pol_file):
        t0 = time.time()
        mp.dps = 30
        refine = set(range(min(args.head, len(gammas))))
        refine |= set(np.nonzero(np.abs(zd) < 0.02)[0].tolist())
        refine = sorted(refine)
        gam_r = gammas.copy()
        zp_r = zprime.copy()
        for j, k in enumerate(refine):
            t = gam_r[k]
            # one Newton step with an arbitrary-precision residual
            t = t - float(mp.siegelz(t)) / zd[k]
            gam_r[k] = t
            zp_r[k] = complex(mp.zeta(mp.mpc(0.5, t), derivative=1))
            if (j + 1) % 200 == 0:
                print(f"  polish: {j+1}/{len(refine)}", flush=True)
        np.savez(pol_file, gammas=gam_r, zp_re=zp_r.real, zp_im=zp_r.imag,
                 refined=np.array(refine))
        print(f"[6] polished {len(refine)} zeros in {time.time()-t0:.1f}s", flush=True)
    pol = np.load(pol_file)
    gammas = pol["gammas"]
    zprime = pol["zp_re"] + 1j * pol["zp_im"]

    # ---- stage 7: validation --------------------------------------------
    rep_file = os.path.join(wd, "report.json")
    if not stage(rep_file):
        t0 = time.time()
        mp.dps = 30
        n = args.count
        assert np.all(np.diff(gammas[: n + 1]) > 0), "ordinates not increasing"
        assert 14.0 < gammas[0] < 14.2, "first ordinate out of window"
        assert abs(gammas[0] - 14.134725141734693790) < 1e-9
        min_gap = float(np.min(np.diff(gammas[: n + 1])))
        rng = np.random.default_rng(20260819)
        pool = np.arange(min(args.head, n - 1), n)
        sample = rng.choice(pool, size=min(args.sample, len(pool)), replace=False)
        max_gamma_off = 0.0
        max_zp_rel = 0.0
        for k in sample:
            off = abs(float(mp.siegelz(gammas[k]))) / abs(zd[k])
            max_gamma_off = max(max_gamma_off, off)
        for k in sample[:60]:
            ref = complex(mp.zeta(mp.mpc(0.5, gammas[k]), derivative=1))
            rel = abs(zprime[k] - ref) / abs(ref)
            max_zp_rel = max(max_zp_rel, rel)
        report = {
            "count": n,
            "gamma_first": float(gammas[0]),
            "gamma_last": float(gammas[n - 1]),
            "gamma_next": float(gammas[n]),
            "min_gap": min_gap,
            "sampled": int(len(sample)),
            "max_gamma_offset": max_gamma_off,
            "max_zeta_prime_rel_err": max_zp_rel,
            "validation_seconds": round(time.time() - t0, 1),
        }
        assert max_gamma_off < 2e-9, f"gamma offset {max_gamma_off:g}"
        assert max_zp_rel < 1e-8, f"zeta' rel err {max_zp_rel:g}"
        with open(rep_file, "w") as fh:
            json.dump(report, fh, indent=2)
        print(f"[7] validation: {json.dumps(report)}", flush=True)

    # ---- stage 8: emit ----------------------------------------------------
    n = args.count
    out = args.out
    os.makedirs(os.path.dirname(out) or ".", exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write("index,gamma,zeta_prime_re,zeta_prime_im\n")
        for i in range(n):
            fh.write("%d,%.15g,%.15g,%.15g\n"
                     % (i + 1, gammas[i], zprime[i].real, zprime[i].imag))
    size = os.path.getsize(out)
    print(f"[8] wrote {out} ({size/1e6:.1f} MB)", flush=True)
    if args.gzip:
        with open(out, "rb") as fh, gzip.open(out + ".gz", "wb", compresslevel=9) as gz:
            gz.write(fh.read())
        print(f"    wrote {out}.gz ({os.path.getsize(out + '.gz')/1e6:.1f} MB)",
              flush=True)
    with open(rep_file) as fh:
        print("report:", fh.read(), flush=True)


if __name__ == "__main__":
    sys.exit(main())
