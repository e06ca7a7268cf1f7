"""``kruskallab`` command line.

Every subcommand prints exactly one JSON document on stdout.  Exit codes:

    0  clean result (including "holds" and "not_applicable")
    1  COUNTEREXAMPLE, or a proved statement appeared to fail
    2  bad input: usage, parse, schema or precondition errors

Errors print ``{"error", "message", "location"}``; anything else goes to stderr.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys

from . import _backend
from .conjecture import (
    COUNTEREXAMPLE,
    TARGETS,
    SearchSpace,
    reduction_pairing,
    search_counterexamples,
    tight_example,
    verify_conjecture_instance,
    verify_rank_version,
    verify_two_dim_case,
)
from .errors import (
    ContradictionDetected,
    FalsificationEvent,
    FieldMismatch,
    KruskalLabError,
    PreconditionFailed,
    SchemaError,
)
from .generators import random_product_set
from .io import (
    chain_problem_from_json,
    dumps,
    instance_to_json,
    load_json,
    parse_instance,
)
from .kruskal import certify_uniqueness, check_general_position
from .linalg import FieldSpec
from .ranklab import (
    DEFAULT_BUDGET,
    classify_2d_subspace,
    is_product_sum_pair,
    tensor_rank,
    unique_decomposition_check,
)
from .tensors import ProductVectorSet, span_dims, sum_set
from .zerosum import (
    build_chain,
    check_lemma_conditions,
    is_irreducible,
    minimal_zero_partition,
    zero_sum_subsets,
)

log = logging.getLogger("kruskallab")


class UsageError(KruskalLabError):
    code = "UsageError"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, location=self.prog)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _field(text: str) -> FieldSpec:
    try:
        return FieldSpec.parse(text)
    except KruskalLabError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# -- input helpers ---------------------------------------------------------------

def _check_field(args, obj_field: FieldSpec) -> None:
    if args.field is not None and args.field != obj_field:
        raise FieldMismatch(f"--field {args.field} but the input is over {obj_field}", location="--field")


def _load(args, attr: str = "input"):
    path = getattr(args, attr)
    if path is None:
        raise UsageError(f"--{attr.replace('_', '-')} is required", location=f"--{attr}")
    obj = parse_instance(path)
    first = obj[0] if isinstance(obj, list) else obj
    _check_field(args, first.field)
    return obj


def _load_set(args, attr: str = "input") -> ProductVectorSet:
    if attr == "input" and args.random is not None:
        if args.dims is None:
            raise UsageError("--random needs --dims", location="--dims")
        field = args.field or FieldSpec.prime(2)
        return random_product_set(random.Random(args.seed), field, args.dims, args.random)
    obj = _load(args, attr)
    if not isinstance(obj, ProductVectorSet):
        raise SchemaError("expected an instance with 'vectors'", location=getattr(args, attr))
    return obj


# -- subcommands -------------------------------------------------------------------

def cmd_check_gp(args) -> dict:
    s = _load_set(args)
    d = args.d if args.d is not None else span_dims(s)
    return check_general_position(s, d).to_json()


def cmd_kruskal_cert(args) -> dict:
    s = _load_set(args)
    doc = certify_uniqueness(s).to_json()
    if args.confirm and doc["certified"] and s.field.is_finite:
        result = unique_decomposition_check(sum_set(s), s.n, budget=args.budget)
        if not result.unique:
            raise ContradictionDetected(f"certified set has {result.count} decompositions")
        doc["confirmed"] = True
    return doc


def cmd_rank(args) -> dict:
    obj = _load_set(args) if args.random is not None else _load(args)
    if isinstance(obj, list):
        raise SchemaError("expected one tensor or one set of vectors", location="tensors")
    t = sum_set(obj) if isinstance(obj, ProductVectorSet) else obj
    if args.unique is not None:
        return unique_decomposition_check(t, args.unique, budget=args.budget).to_json()
    return tensor_rank(t, max_r=args.max_r, budget=args.budget).to_json()


def cmd_zero_subsets(args) -> dict:
    s = _load_set(args)
    subsets = zero_sum_subsets(s)
    return {"n": s.n, "count": len(subsets), "subsets": [sorted(a + 1 for a in g) for g in subsets]}


def cmd_partition(args) -> dict:
    s = _load_set(args)
    part = minimal_zero_partition(s)
    return {"partition": part.to_json(), "block_sizes": part.sizes(), "irreducible": is_irreducible(s)}


def cmd_chain(args) -> dict:
    if args.input is None:
        raise UsageError("--in is required", location="--in")
    cp = chain_problem_from_json(load_json(args.input))
    check = check_lemma_conditions(cp)
    if not check.ok:
        return {"conditions": check.to_json(), "chain": None}
    return {"conditions": check.to_json(), "chain": build_chain(cp).to_json()}


def cmd_classify_subspace(args) -> dict:
    obj = _load(args)
    if not isinstance(obj, list) or len(obj) != 2:
        raise SchemaError("expected 'tensors' with exactly two entries", location="tensors")
    return classify_2d_subspace(obj[0], obj[1]).to_json()


def cmd_product_pair(args) -> dict:
    s = _load_set(args)
    if s.n != 2:
        raise SchemaError(f"expected 2 vectors, got {s.n}", location="vectors")
    coeffs = [s.field.parse_scalar(c) for c in args.coeffs.split(",")] if args.coeffs else [1, 1]
    if len(coeffs) != 2:
        raise UsageError("--coeffs takes two scalars", location="--coeffs")
    return is_product_sum_pair(s[0], s[1], *coeffs).to_json()


def cmd_tight_gen(args) -> dict:
    return instance_to_json(tight_example(args.n, args.field or FieldSpec.rationals()))


def cmd_verify(args) -> dict:
    s = _load_set(args)
    if args.target == "conj13":
        return verify_conjecture_instance(s).to_json()
    if args.target == "thm32":
        return verify_two_dim_case(s).to_json()
    mode = "kr_thm41" if args.target == "thm41" else "conj52"
    r = args.r
    if r is None:
        r = tensor_rank(sum_set(s), budget=args.budget).rank
    return verify_rank_version(s, r, mode, budget=args.budget).to_json()


def cmd_search(args) -> dict:
    n_lo, n_hi = args.n_range
    m_range = tuple(args.m_range) if args.m_range else None
    space = SearchSpace(args.field or FieldSpec.prime(2), tuple(args.dims), (n_lo, n_hi), m_range, args.relabel)
    return search_counterexamples(space, args.target, workers=args.workers, budget=args.budget).to_json()


def cmd_pairing(args) -> dict:
    xs, ys = _load_set(args), _load_set(args, "with_")
    return reduction_pairing(xs, ys).to_json()


def _counterexample_found(name: str, doc: dict) -> bool:
    if name == "verify":
        return doc.get("status") == COUNTEREXAMPLE
    if name == "search":
        return bool(doc.get("counterexamples"))
    return False


# -- parser ------------------------------------------------------------------------

def _pair(text: str) -> list[int]:
    values = _int_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", type=_field, default=None, help="p in {2,3,5,7} or Q")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max candidates for exhaustive work")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0, help="seed for --random instances")
    common.add_argument("--backend", choices=("auto", "cython", "python"), default="auto")
    common.add_argument("-v", "--verbose", action="store_true")

    source = _Parser(add_help=False)
    source.add_argument("--in", dest="input", metavar="PATH")
    source.add_argument("--random", type=int, metavar="N", help="use N seeded random product vectors")
    source.add_argument("--dims", type=_int_list, help="dims for --random, e.g. 2,2,2")

    parser = _Parser(prog="kruskallab", description="Exact verifiers for product-vector zero sums and tensor rank.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, parents=(common, source)):
        p = sub.add_parser(name, parents=list(parents), help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    p = add("check-gp", cmd_check_gp, "general-position check")
    p.add_argument("--d", type=_int_list, help="requested d_j per mode (default: span dimensions)")
    p = add("kruskal-cert", cmd_kruskal_cert, "Kruskal uniqueness certificate")
    p.add_argument("--confirm", action="store_true", help="cross-check by full enumeration (finite fields)")
    p = add("rank", cmd_rank, "exact tensor rank of a tensor or of the sum of a set")
    p.add_argument("--max-r", type=int, default=None)
    p.add_argument("--unique", type=int, metavar="R", help="enumerate all rank-R decompositions instead")
    add("zero-subsets", cmd_zero_subsets, "all zero-sum subsets")
    add("partition", cmd_partition, "minimal zero partition")
    add("chain", cmd_chain, "chain cover for two block families", parents=(common, source))
    add("classify-subspace", cmd_classify_subspace, "category of the plane spanned by two tensors")
    p = add("product-pair", cmd_product_pair, "is a1*x1 + a2*x2 a product vector")
    p.add_argument("--coeffs", help="a1,a2 (default 1,1)")
    p = add("tight-gen", cmd_tight_gen, "irreducible zero sum with n = m + 2", parents=(common,))
    p.add_argument("--n", type=int, required=True)
    p = add("verify", cmd_verify, "run one verifier on an instance")
    p.add_argument("--target", choices=TARGETS, required=True)
    p.add_argument("--r", type=int, default=None, help="rank for thm41/conj52 (default: oracle rank of the sum)")
    p = add("search", cmd_search, "exhaustive search for counterexamples", parents=(common,))
    p.add_argument("--target", choices=TARGETS, required=True)
    p.add_argument("--dims", type=_int_list, required=True)
    p.add_argument("--n-range", type=_pair, required=True, metavar="LO,HI")
    p.add_argument("--m-range", type=_pair, default=None, metavar="LO,HI")
    p.add_argument("--relabel", action="store_true", help="also reduce by per-mode basis permutations")
    p = add("pairing", cmd_pairing, "match two decompositions of one tensor")
    p.add_argument("--with", dest="with_", metavar="PATH", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(dumps(exc.to_dict()))
        return 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        _backend.use(args.backend)
        if args.workers < 1:
            raise PreconditionFailed("--workers must be at least 1", location="--workers")
        doc = args.func(args)
    except FalsificationEvent as exc:
        print(dumps(exc.to_dict()))
        return 1
    except KruskalLabError as exc:
        print(dumps(exc.to_dict()))
        return 2
    except RuntimeError as exc:  # backend requested but not built
        print(dumps({"error": "RuntimeError", "message": str(exc), "location": None}))
        return 2
    print(dumps(doc))
    return 1 if _counterexample_found(args.command, doc) else 0


if __name__ == "__main__":
    raise SystemExit(main())
