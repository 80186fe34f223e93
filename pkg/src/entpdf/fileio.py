"""JSON and CSV formats for states, marker sets and rendered densities.

Every real number is written with 15 significant digits, so parsing a file
and writing it back reproduces it byte for byte.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .compose import Angles, MarkerSet, WeightVector, eigenvalues_from_mu
from .core import as_density_matrix, as_pure_state
from .errors import InfeasibleMarkers
from .haar import Pi2Markers, invert_pi2, pi2_markers

SIG_DIGITS = 15
MARKER_KEYS = {"mu", "e1", "e_cusp", "e_max", "e_perp", "angles"}
ANGLE_KEYS = ("theta", "phi", "theta_perp", "phi_perp")


def num(x) -> float:
    """Round to the file precision."""
    return float(f"{float(x) + 0.0:.{SIG_DIGITS}g}")


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    # Adding 0.0 turns -0.0 into 0.0.
    return f"{float(x) + 0.0:.{SIG_DIGITS}g}"


def dump_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def load_json(path):
    return json.loads(Path(path).read_text())


def write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path):
    """Header and float rows of a file written by :func:`write_csv`."""
    lines = Path(path).read_text().splitlines()
    return lines[0].split(","), [[float(v) for v in ln.split(",")] for ln in lines[1:]]


# -- states -------------------------------------------------------------------


def _complex_array(data, shape) -> np.ndarray:
    a = np.asarray(data, dtype=float)
    if a.shape != shape + (2,):
        raise ValueError(f"expected shape {shape + (2,)} of [re, im] pairs, got {a.shape}")
    return a[..., 0] + 1j * a[..., 1]


def _pairs(a: np.ndarray):
    return np.stack([a.real, a.imag], axis=-1).tolist()


def state_to_dict(rho) -> dict:
    m = np.asarray(rho, dtype=complex)
    return {"rho": [[[num(re), num(im)] for re, im in row] for row in _pairs(m)]}


def state_from_dict(d) -> np.ndarray:
    return as_density_matrix(_complex_array(d["rho"], (4, 4)))


def pure_state_from_dict(d) -> np.ndarray:
    return as_pure_state(_complex_array(d["psi"], (4,)), atol=1e-9)


def read_state(path) -> np.ndarray:
    return state_from_dict(load_json(path))


def write_state(rho, path) -> None:
    dump_json(state_to_dict(rho), path)


# -- markers ------------------------------------------------------------------


def markers_to_dict(m: MarkerSet) -> dict:
    """Absent fields are omitted, never zero-filled."""
    out = {"mu": [num(v) for v in m.mu.mu]}
    if m.e1 is not None:
        out["e1"] = num(m.e1)
    if m.pi2 is not None:
        out["e_cusp"] = num(m.pi2.e_cusp)
        out["e_max"] = num(m.pi2.e_max)
    if m.e_perp is not None:
        out["e_perp"] = num(m.e_perp)
    angles = {k: num(v) for k, v in m.angles.as_dict().items()}
    if angles:
        out["angles"] = angles
    return out


def _pi2_from(e_max: float, e_cusp: float) -> Pi2Markers:
    if e_cusp > e_max + 1e-12:
        raise InfeasibleMarkers(f"e_cusp={e_cusp} exceeds e_max={e_max}", e_cusp - e_max)
    if e_max < 1e-12:
        return Pi2Markers(0.0, 0.0, np.inf, 0.0)
    x, y, _ = invert_pi2(e_max, e_cusp)
    ref = pi2_markers(x, y)
    return Pi2Markers(e_max, e_cusp, ref.p_at_emax, ref.mu_angle)


def markers_from_dict(d) -> MarkerSet:
    unknown = set(d) - MARKER_KEYS
    if unknown:
        raise ValueError(f"unknown marker fields: {sorted(unknown)}")
    if "mu" not in d:
        raise InfeasibleMarkers("marker field 'mu' is required")
    mu = np.asarray(d["mu"], dtype=float)
    if mu.shape != (4,):
        raise InfeasibleMarkers(f"'mu' must have 4 entries, got {mu.size}")
    if np.any(mu < -1e-12) or abs(mu.sum() - 1.0) > 1e-9:
        raise InfeasibleMarkers("'mu' must be non-negative and sum to 1", abs(mu.sum() - 1.0))
    lam = eigenvalues_from_mu(mu)
    w = WeightVector(tuple(float(v) for v in lam - np.append(lam[1:], 0.0)), tuple(float(v) for v in mu))
    has_max, has_cusp = "e_max" in d, "e_cusp" in d
    if has_max != has_cusp:
        raise InfeasibleMarkers("'e_max' and 'e_cusp' must be given together")
    pi2 = _pi2_from(float(d["e_max"]), float(d["e_cusp"])) if has_max else None
    ang = d.get("angles", {})
    bad = set(ang) - set(ANGLE_KEYS)
    if bad:
        raise ValueError(f"unknown angle fields: {sorted(bad)}")
    angles = Angles(**{k: float(v) for k, v in ang.items()})
    e1 = float(d["e1"]) if "e1" in d else None
    e_perp = float(d["e_perp"]) if "e_perp" in d else None
    return MarkerSet(w, e1, pi2, e_perp, angles)


def read_markers(path) -> MarkerSet:
    return markers_from_dict(load_json(path))


def write_markers(m: MarkerSet, path) -> None:
    dump_json(markers_to_dict(m), path)
