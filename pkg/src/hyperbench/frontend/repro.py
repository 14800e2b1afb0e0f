"""Worked computations the workbench reproduces end to end.

Each case builds its fixture from builtins, runs the relevant operations and
returns a report whose violations mean the expected outcome was not met,
together with the inputs and both sides of the computation.
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from hyperbench.backend.builtins import sign
from hyperbench.backend.census import rule_strings
from hyperbench.backend.errors import StructureError
from hyperbench.backend.fields import galois_field
from hyperbench.backend.hyper import check_hyperfield, mask_label, to_mask
from hyperbench.backend.hyperpair import build_hyperpair
from hyperbench.backend.module import boolean_module, direct_sum
from hyperbench.backend.nr_tensor import nr_assoc_counterexample
from hyperbench.backend.pair import find_property_N
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.backend.residue import residue, residue_constants, subgroup_from_labels
from hyperbench.backend.tensor import DEFAULT_MAX_TERMS, build_tensor
from hyperbench.backend.tensor_maps import residue_tensor_iso
from hyperbench.utils.logger import get_logger

logger = get_logger()

RECOMBINE_BOUND = 4
RESIDUE_TENSOR_BOUND = 3


@dataclass(frozen=True)
class Reproduction:
    """Outcome of a case.

    Attributes:
      case: Case name.
      report: Violations of the expected outcome, with facts.
      output: Inputs and computed sides, JSON-ready.
    """

    case: str
    report: ReportOfViolations = field(repr=False)
    output: dict[str, Any] = field(default_factory=dict)


def repro_nar1(bound: int, max_terms: int) -> Reproduction:
    """Two bracketings of a four-term sum in the tensor of two 2-chains."""
    witness = nr_assoc_counterexample(2)
    out = ViolationCollector("nar1")
    if witness.rendered != ("{2⊗2}", "∅"):
        out.add("bracketings", witness.rendered)
    return Reproduction("nar1", out.build(), witness.to_dict())


def repro_krasner(bound: int, max_terms: int) -> Reproduction:
    """``F3`` modulo ``{1, 2}`` is the Krasner hyperfield."""
    m = galois_field(3).to_module()
    r = residue(m, subgroup_from_labels(m.monoid, ["1", "2"]))
    h = r.hypermagma
    out = ViolationCollector("krasner")
    one, zero = r.class_of(1), r.class_of(0)
    if int(h.add[one, one]) != to_mask([zero, one]):
        out.add("one_plus_one", (one, one))
    report = out.build().merged(check_hyperfield(h))
    output = {
        "classes": [[m.labels[x] for x in c] for c in r.classes],
        "add": rule_strings(h),
        "one_plus_one": mask_label(h.labels, int(h.add[one, one])),
    }
    return Reproduction("krasner", report, output)


def repro_sign_e(bound: int, max_terms: int) -> Reproduction:
    """``e = 1 + (-1)`` in the sign hyperpair, and ``ee = e + e`` on ``F7/{1,2,4}``."""
    out = ViolationCollector("sign-e")
    hp = build_hyperpair(sign())
    witnesses = find_property_N(hp.to_pair())
    labels = hp.labels
    if not witnesses or hp.family[witnesses[0].e] != hp.base.full:
        out.add("sign_e", ())
    m = galois_field(7).to_module()
    r = residue(m, subgroup_from_labels(m.monoid, ["1", "2", "4"]))
    consts = residue_constants(r)
    if not consts.holds:
        out.add("ee_equals_e_plus_e", (consts.e,))
    rl = r.hypermagma.labels
    output: dict[str, Any] = {
        "sign": {
            "pseudo_negative": [labels[w.pseudo_neg_one] for w in witnesses],
            "e": [labels[w.e] for w in witnesses],
        },
        "F7/{1,2,4}": {
            "e": mask_label(rl, consts.e),
            "ee": mask_label(rl, consts.ee),
            "e_plus_e": mask_label(rl, consts.e_plus_e),
            "scaled": [mask_label(rl, s) for s in consts.scaled],
        },
    }
    return Reproduction("sign-e", out.build(), output)


def repro_recombine(bound: int, max_terms: int) -> Reproduction:
    """A sum of two non-simple tensors that is simple, in ``B^2 (x) B^2``.

    With ``v3 = v1 + v2`` the chain is
    ``v3⊗v2 + v2⊗v1 + v2⊗v2 + v1⊗v3 = v3⊗v2 + v2⊗v3 + v1⊗v3
    = v3⊗v2 + v3⊗v3 = v3⊗(v2+v3)``.
    """
    b = boolean_module()
    m = direct_sum(b, b)
    v1, v2, v3 = m.index("(1,0)"), m.index("(0,1)"), m.index("(1,1)")
    closure = build_tensor(m, m, bound=max(bound, RECOMBINE_BOUND), max_terms=max_terms)
    chain = [
        [(v3, v2), (v2, v1), (v2, v2), (v1, v3)],
        [(v3, v2), (v2, v3), (v1, v3)],
        [(v3, v2), (v3, v3)],
        [(v3, m.plus(v2, v3))],
    ]
    classes = [closure.class_of_pairs(step) for step in chain]
    out = ViolationCollector("recombine")
    for k in range(1, len(chain)):
        if classes[k] != classes[0]:
            out.add("chain_step", (k,))
    halves = [[(v3, v2), (v2, v1)], [(v2, v2), (v1, v3)]]
    simple = [
        any(len(t) == 1 for t in closure.members(closure.class_of_pairs(h))) for h in halves
    ]
    out.fact("halves_simple", simple)
    out.fact("saturated", closure.saturated)

    def render(step: list[tuple[int, int]]) -> str:
        return " + ".join(f"{m.labels[i]}⊗{m.labels[j]}" for i, j in step)

    output = {
        "v1": m.labels[v1],
        "v2": m.labels[v2],
        "v3": m.labels[v3],
        "chain": [render(step) for step in chain],
        "classes": classes,
    }
    return Reproduction("recombine", out.build(), output)


def repro_residue_tensor(bound: int, max_terms: int) -> Reproduction:
    """``(F3/G) (x) (F3/G)`` against the residue of ``F3 (x) F3`` for ``G = {1, 2}``."""
    m = galois_field(3).to_module()
    g = subgroup_from_labels(m.monoid, ["1", "2"])
    iso = residue_tensor_iso(m, g, m, g, bound=RESIDUE_TENSOR_BOUND, max_terms=max_terms)
    output = {"classes": len(iso.table), "table": [int(x) for x in iso.table]}
    return Reproduction("residue-tensor", iso.report, output)


CASES: dict[str, Callable[[int, int], Reproduction]] = {
    "nar1": repro_nar1,
    "krasner": repro_krasner,
    "sign-e": repro_sign_e,
    "recombine": repro_recombine,
    "residue-tensor": repro_residue_tensor,
}


def reproduce(case: str, bound: int = 4, max_terms: int = DEFAULT_MAX_TERMS) -> Reproduction:
    """Run a named case.

    Raises:
      StructureError: For an unknown case.
    """
    if case not in CASES:
        logger.error(f"repro: unknown case {case!r}; expected one of {sorted(CASES)}")
        raise StructureError(f"repro: unknown case {case!r}")
    result = CASES[case](bound, max_terms)
    logger.info(f"repro {case}: {'reproduced' if result.report.ok else 'not reproduced'}")
    return result
