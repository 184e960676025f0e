"""Re-evaluate a recorded witness from its serialized location."""

import numpy as np

from ._validation import TOL_INEQ
from .admissibility import Witness, chord_profile, classical_fisher_along
from .projective import amps_from_json, basis_ray, curve_from_spec, fs_distance, quantum_fisher
from .readouts import parse_generator, parse_readout
from .rigidity import parse_orthant_map, parse_self_map
from .simplex import fisher_pushforward, round_distance


def _sides(w):
    loc = w.location
    kind = w.kind
    if kind == "H3":
        d = loc["d"]
        i = loc["vertex"] - 1
        e = np.eye(d)
        if "readout" in loc:
            out = parse_readout(loc["readout"]).transform(e.astype(complex)[i])
        else:
            out = parse_self_map(loc["map"])(e[i])
        return float(np.max(np.abs(out - e[i]))), 0.0
    if kind == "H2":
        P = parse_readout(loc["readout"])
        curve = curve_from_spec(loc["curve"])
        s, h = loc["s"], loc["h"]
        return float(classical_fisher_along(P, curve, s, h)), float(quantum_fisher(curve, s, h))
    if kind == "H1":
        P = parse_readout(loc["readout"])
        curve = curve_from_spec(loc["curve"])
        _, coarse = chord_profile(P, curve, loc["n_coarse"])
        _, fine = chord_profile(P, curve, loc["n_fine"])
        q = w.quantities
        if q["criterion"] == "chord-shrink":
            return float(fine.max()), float(coarse.max()) / q["shrink"]
        return float(abs(fine.sum() - coarse.sum())), q["tol"] + float(coarse.max())
    if kind == "Lipschitz":
        metric = loc["metric"]
        if metric == "round":
            Psi = parse_orthant_map(loc["map"])
            x, y = np.array(loc["x"]), np.array(loc["y"])
            return float(round_distance(Psi(x), Psi(y))), float(round_distance(x, y))
        if metric == "fisher":
            T = parse_self_map(loc["map"])
            pushed, original, _ = fisher_pushforward(T, np.array(loc["u"]), np.array(loc["v"]), loc["h"])
            return pushed, original
        if metric == "fs-to-round":
            P = parse_readout(loc["readout"])
            psi = amps_from_json(loc["psi"])
            i = loc["vertex"] - 1
            d = psi.size
            return (
                float(round_distance(P.sqrt_transform(psi), np.eye(d)[i])),
                float(fs_distance(psi, basis_ray(d, i))),
            )
        raise ValueError(f"unknown Lipschitz metric {metric!r}")
    if kind == "VertexDominance":
        Psi = parse_orthant_map(loc["map"])
        x = np.array(loc["x"])
        e = np.eye(x.size)[loc["vertex"] - 1]
        return float(round_distance(Psi(x), e)), float(round_distance(x, e))
    f = parse_generator(loc["generator"])
    if kind == "Normalization":
        return float(np.sum(f(np.array(loc["u"])))), 1.0
    if kind == "Cauchy":
        u, v = loc["u"], loc["v"]
        return float(f(u + v)), float(f(u) + f(v))
    if kind == "Markov":
        k, s = loc["k"], loc["s"]
        return float(f(k * s) + f((1.0 - k) * s)), float(f(s))
    raise ValueError(f"cannot replay witness kind {kind!r}")


def replay_witness(w, tol=TOL_INEQ):
    """Recompute both sides of a witness.

    Returns a dict with the fresh ``lhs``/``rhs`` and ``reproduced``: both
    sides within ``10 * tol`` (relative, floored at 1) of the recorded
    values, and the relation still violated.
    """
    if isinstance(w, dict):
        w = Witness(**w)
    lhs, rhs = _sides(w)
    old_l, old_r = w.quantities["lhs"], w.quantities["rhs"]
    close = abs(lhs - old_l) <= 10 * tol * max(1.0, abs(old_l)) and abs(rhs - old_r) <= 10 * tol * max(1.0, abs(old_r))
    if w.kind in ("Normalization", "Cauchy", "Markov"):
        violated = abs(lhs - rhs) > tol
    else:
        violated = lhs > rhs
    return {"kind": w.kind, "lhs": lhs, "rhs": rhs, "reproduced": bool(close and violated)}
