"""Command-line entry point: ``python -m entpdf <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 statistical goal not met.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .compose import compose_pdf, evaluate_pdf, extract_markers
from .core import (
    BELL_PHI_PLUS,
    concurrence_many,
    negativity_many,
    random_density_matrices,
)
from .errors import DegenerateSubspace, EntanglementError, InsufficientResolution
from .features import detect_features
from .haar import (
    DEFAULT_BINS,
    Atom,
    invert_pi2,
    pi2_markers,
    pi3_bin_densities,
    sample_pi2,
    sample_pi3,
)
from .pps import PseudoPureSpec, analyze_pps
from .reconstruct import build_state

EXIT_OK, EXIT_INPUT, EXIT_STAT = 0, 2, 3
DEFAULT_SAMPLES = 10**6
DEFAULT_SEED = 42


class StatisticalGoalNotMet(RuntimeError):
    pass


def _outdir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _write_density(path, hist, present: bool = True) -> None:
    rows = zip(hist.centers, hist.densities) if present else ()
    fileio.write_csv(path, ("bin_center", "density"), rows)


def _write_atoms(path, atoms) -> None:
    fileio.write_csv(path, ("location", "weight"), [(a.location, a.weight) for a in atoms])


# -- commands -------------------------------------------------------------------


def cmd_analyze(args) -> int:
    rho = fileio.read_state(args.state)
    out = _outdir(args.out)
    markers = extract_markers(rho)
    pdf = compose_pdf(markers)
    hist, atoms = evaluate_pdf(pdf, args.bins, samples=args.samples, seed=args.seed)
    fileio.write_markers(markers, out / "markers.json")
    _write_density(out / "pdf.csv", hist, present=bool(pdf.continuous))
    _write_atoms(out / "atoms.csv", atoms)
    for k, v in markers.scalars().items():
        print(f"{k} = {v:.6f}")
    if pdf.continuous:
        try:
            found = detect_features(hist, atoms).as_dict()
            print("detected: " + (", ".join(f"{k}={v:.3f}" for k, v in found.items()) or "none"))
        except InsufficientResolution as e:
            print(f"feature detection skipped: {e}", file=sys.stderr)
    return EXIT_OK


def cmd_subspace(args) -> int:
    if (args.x is None) != (args.y is None) or (args.emax is None) != (args.ecusp is None):
        raise ValueError("give both --x and --y, or both --emax and --ecusp")
    if (args.x is None) == (args.emax is None):
        raise ValueError("give exactly one of (--x, --y) or (--emax, --ecusp)")
    if args.x is None:
        x, y, _ = invert_pi2(args.emax, args.ecusp)
    else:
        x, y = args.x, args.y
    z = float(np.sqrt(max(0.0, 1 - x * x - y * y)))
    try:
        pm = pi2_markers(x, y)
    except DegenerateSubspace:
        # Every state is a product state: the density is an atom at zero.
        pm = None
    out = _outdir(args.out)
    if pm is None:
        report = {"x": x, "y": y, "z": z, "e_max": 0.0, "e_cusp": 0.0}
        fileio.dump_json({k: fileio.num(v) for k, v in report.items()}, out / "markers.json")
        _write_density(out / "pdf.csv", None, present=False)
        _write_atoms(out / "atoms.csv", [Atom(1.0, 0.0)])
        print("every state in the subspace is separable: atom at E = 0")
        return EXIT_OK
    report = {"x": x, "y": y, "z": z, "e_max": pm.e_max, "e_cusp": pm.e_cusp, "mu_angle": pm.mu_angle}
    if np.isfinite(pm.p_at_emax):
        report["p_at_emax"] = pm.p_at_emax
    if args.emax is not None:
        # Echo the requested landmarks rather than their recomputed round-off.
        report["e_max"], report["e_cusp"] = args.emax, args.ecusp
    fileio.dump_json({k: fileio.num(v) for k, v in report.items()}, out / "markers.json")
    hist = sample_pi2(x, y, args.samples, args.seed, bins=args.bins)
    _write_density(out / "pdf.csv", hist)
    print(f"x = {x:.6f}, y = {y:.6f}, z = {z:.6f}, e_max = {pm.e_max:.6f}, e_cusp = {pm.e_cusp:.6f}")
    return EXIT_OK


def dual_state(e_perp: float) -> np.ndarray:
    """A state of entanglement ``e_perp`` (its complement is the rank-3 subspace)."""
    a = 0.5 * np.arcsin(np.clip(e_perp, 0.0, 1.0))
    return np.array([np.cos(a), 0, 0, np.sin(a)], dtype=complex)


def cmd_pi3(args) -> int:
    if not 0.0 <= args.eperp:
        raise ValueError(f"--eperp must be >= 0, got {args.eperp}")
    closed = pi3_bin_densities(args.eperp, args.bins)
    out = _outdir(args.out)
    hist = sample_pi3(dual_state(args.eperp), args.samples, args.seed, bins=args.bins)
    fileio.write_csv(out / "closed_form.csv", ("bin_center", "density"), zip(hist.centers, closed))
    _write_density(out / "sampled.csv", hist)
    print(f"L1 = {hist.l1(closed):.6f}")
    return EXIT_OK


def cmd_pps(args) -> int:
    if args.psi == "bell":
        psi = BELL_PHI_PLUS
    else:
        psi = fileio.pure_state_from_dict(fileio.load_json(args.psi))
    rep = analyze_pps(PseudoPureSpec(args.epsilon, psi))
    out = _outdir(args.out)
    fileio.dump_json({k: fileio.num(v) for k, v in rep.as_dict().items()}, out / "report.json")
    print(
        f"mu1 = {rep.mu1:.6e}, mu4 = {rep.mu4:.6f}, atom at {rep.atom_location:.6f}, "
        f"concurrence = {rep.concurrence:.6f}, negativity = {rep.negativity:.6f}"
    )
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    markers = fileio.read_markers(args.markers)
    rho = build_state(markers)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    fileio.write_state(rho, args.out)
    print(f"wrote state to {args.out}")
    return EXIT_OK


def _range_table(a: np.ndarray, op):
    """Sparse table for O(1) idempotent range queries."""
    table = [a]
    k = 1
    while 2 * k <= len(a):
        prev = table[-1]
        table.append(op(prev[:-k], prev[k:]))
        k *= 2
    return table


def _query(table, op, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """``op`` over ``a[lo:hi]`` for each pair (requires ``hi > lo``)."""
    length = hi - lo
    lev = np.floor(np.log2(length)).astype(int)
    out = np.empty(len(lo))
    for L in np.unique(lev):
        sel = lev == L
        t = table[L]
        out[sel] = op(t[lo[sel]], t[hi[sel] - (1 << L)])
    return out


def discordant_pair(conc, neg, dn: float = 1e-3, dc: float = 0.05):
    """Indices ``(i, j)`` with ``|N_i - N_j| < dn`` and the largest ``|C_i - C_j|``.

    Returns ``None`` when the largest difference does not exceed ``dc``.
    """
    conc, neg = np.asarray(conc), np.asarray(neg)
    order = np.argsort(neg, kind="stable")
    n_s, c_s = neg[order], conc[order]
    lo = np.arange(len(n_s))
    hi = np.searchsorted(n_s, n_s + dn, side="left")
    hi = np.maximum(hi, lo + 1)
    tmax, tmin = _range_table(c_s, np.maximum), _range_table(c_s, np.minimum)
    gain = np.maximum(_query(tmax, np.maximum, lo, hi) - c_s, c_s - _query(tmin, np.minimum, lo, hi))
    i = int(np.argmax(gain))
    if gain[i] <= dc:
        return None
    window = c_s[i:hi[i]]
    j = i + int(np.argmax(np.abs(window - c_s[i])))
    return int(order[i]), int(order[j])


def compare_ensemble(n: int, seed):
    """Ranks, concurrences and negativities of ``n`` random states (rank 1..4)."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    ranks = rng.integers(1, 5, n)
    rhos = random_density_matrices(ranks, rng)
    return ranks, concurrence_many(rhos), negativity_many(rhos)


def cmd_compare(args) -> int:
    if args.samples < 1000:
        raise ValueError(f"--samples must be >= 1000, got {args.samples}")
    ranks, conc, neg = compare_ensemble(args.samples, args.seed)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    fileio.write_csv(args.out, ("rank", "concurrence", "negativity"), zip(ranks, conc, neg))
    worst = float(np.max(neg - conc))
    print(f"max(N - C) over rows = {worst:.3e}")
    pair = discordant_pair(conc, neg)
    if pair is None:
        raise StatisticalGoalNotMet("no pair with |dN| < 1e-3 and |dC| > 0.05; increase --samples")
    i, j = pair
    print(
        f"rows {i} and {j}: N = {neg[i]:.6f} vs {neg[j]:.6f}, "
        f"C = {conc[i]:.6f} vs {conc[j]:.6f}"
    )
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def _sampling(p, bins: bool = True):
    if bins:
        p.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="entpdf", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="markers and entanglement density of a state")
    p.add_argument("--state", required=True)
    p.add_argument("--out", required=True)
    _sampling(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("subspace", help="density of a two-dimensional subspace")
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--emax", type=float)
    p.add_argument("--ecusp", type=float)
    p.add_argument("--out", required=True)
    _sampling(p)
    p.set_defaults(func=cmd_subspace)

    p = sub.add_parser("pi3", help="closed-form and sampled rank-3 density")
    p.add_argument("--eperp", type=float, required=True)
    p.add_argument("--out", required=True)
    _sampling(p)
    p.set_defaults(func=cmd_pi3)

    p = sub.add_parser("pps", help="pseudopure-state report")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--psi", default="bell")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pps)

    p = sub.add_parser("reconstruct", help="state from a marker file")
    p.add_argument("--markers", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("compare", help="concurrence vs negativity on random states")
    p.add_argument("--out", required=True)
    _sampling(p, bins=False)
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EntanglementError as e:
        print(f"error: {e.invariant}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except StatisticalGoalNotMet as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_STAT
    except (ValueError, KeyError, TypeError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
