"""The `emfd` command-line front end.

JSON goes to stdout, prose to stderr, and the exit code is the contract:

    0   success; stdout carries the result document
    1   the computation ran but a precondition or identity failed;
        stdout carries a JSON document explaining what went wrong
    2   unusable input (bad flags, unreadable files, parse or schema
        errors); stdout stays empty

Payloads are emitted with sorted keys, so identical inputs (and, for the
verification suites, identical seeds) produce byte-identical output.

The global flags --seed and --json-indent are accepted anywhere on the
command line.  Randomized suites draw every instance from the documented
64-bit linear congruential stream in `rng`, so a suite's instance list is
reproducible from the seed alone, in any language.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

from .charclass import (
    Bundle3Data,
    build_sphere_bundle,
    chi,
    cobordism_order,
    normal_sphere_chi,
    phi,
    xi,
)
from .cohomring import (
    ModelError,
    disjoint_union,
    element_from_json,
    element_to_json,
    model_from_json,
    model_to_json,
    synthetic_four_manifold,
)
from .emanifold import (
    FramedHaefligerData,
    QuasiEData,
    SeifertGeometricData,
    check_sign_eq_4lambda,
    eclass_solve,
    haefliger,
    self_linking,
    sigma_geometric,
    sigma_quasi,
)
from .exactlin import SymmetricForm, rat, rat_to_str, signature
from .linkdiag import PDError, linking_matrix, parse_pd, split_pieces
from .milnor import MilnorError, milnor_sigma_model, milnor_to_json, mu123, sigma_of_link
from .rng import DEFAULT_SEED, Lcg
from .seifert import link_signature, seifert_matrix

__all__ = ["main"]

# repo checkout layout: this file lives at src/emfd/cli.py
_REPO_ROOT = Path(__file__).resolve().parents[2]

_LINK_OPS = ("lk", "split", "seifert", "signature", "mu", "sigma")
_MANIFOLD_OPS = (
    "chi", "xi", "phi", "order", "sphere-bundle",
    "sigma-quasi", "sigma-geometric", "haefliger", "eclass-solve",
)
_SUITES = ("chi-upsilon-xi", "normal-sphere", "sign-4lambda", "milnor-identity", "additivity", "all")

_SCHEMA_OF = {
    "chi": "chi_input",
    "phi": "chi_input",
    "order": "chi_input",
    "xi": "bundle3_input",
    "sphere-bundle": "bundle3_input",
    "sigma-quasi": "quasi_input",
    "sigma-geometric": "geometric_input",
    "haefliger": "haefliger_input",
    "eclass-solve": "eclass_input",
}


class UsageError(Exception):
    """Unusable input: reported on stderr only, exit code 2."""


# -- plumbing ------------------------------------------------------------------


def _emit(payload, indent):
    if indent is None:
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    else:
        text = json.dumps(payload, sort_keys=True, indent=indent)
    sys.stdout.write(text + "\n")


def _split_global(argv):
    """Strip --seed/--json-indent (any position) before subcommand parsing."""
    seed, indent, rest = DEFAULT_SEED, None, []
    i = 0
    while i < len(argv):
        arg = argv[i]
        name = arg.split("=", 1)[0]
        if name in ("--seed", "--json-indent"):
            if "=" in arg:
                raw = arg.split("=", 1)[1]
            else:
                i += 1
                if i >= len(argv):
                    raise UsageError(f"{name} needs an integer value")
                raw = argv[i]
            try:
                value = int(raw)
            except ValueError:
                raise UsageError(f"{name} needs an integer value, got {raw!r}") from None
            if name == "--seed":
                seed = value
            else:
                if value < 0:
                    raise UsageError("--json-indent must be >= 0")
                indent = value
        else:
            rest.append(arg)
        i += 1
    return seed, indent, rest


def _parser():
    parser = argparse.ArgumentParser(
        prog="emfd",
        description="Exact e-manifold and triple-linking computations with JSON output.",
        epilog="Global flags (accepted anywhere): --seed N (default %d), --json-indent N."
        % DEFAULT_SEED,
    )
    sub = parser.add_subparsers(dest="group", required=True, metavar="{link,manifold,verify}")

    p_link = sub.add_parser("link", help="operations on PD-coded link diagrams")
    p_link.add_argument("op", choices=_LINK_OPS)
    p_link.add_argument("input", help="PD file path, inline PD text, fixture name, or - for stdin")

    p_man = sub.add_parser("manifold", help="operations on cohomology-model JSON documents")
    p_man.add_argument("op", choices=_MANIFOLD_OPS)
    p_man.add_argument("input", help="JSON file path, fixture name, or - for stdin")

    p_ver = sub.add_parser("verify", help="run a batch verification suite")
    p_ver.add_argument("suite", choices=_SUITES)
    return parser


def _find_shipped(kind, filename):
    """Locate a shipped data file (fixtures/ or schemas/) next to the checkout or cwd."""
    for root in (Path.cwd(), _REPO_ROOT):
        candidate = root / kind / filename
        if candidate.is_file():
            return candidate
    return None


def _read_source(source):
    if source == "-":
        return sys.stdin.read()
    path = Path(source)
    if path.is_file():
        return path.read_text()
    raise UsageError(f"cannot read {source!r}: no such file")


def _load_diagram(source):
    if source != "-" and not Path(source).is_file():
        if "X(" in source or "U(" in source:
            return parse_pd(source)  # inline PD text
        found = _find_shipped("fixtures", source if source.endswith(".pd") else source + ".pd")
        if found is not None:
            return parse_pd(found.read_text())
        raise UsageError(
            f"cannot read {source!r}: not a file, inline PD text, or shipped fixture"
        )
    return parse_pd(_read_source(source))


def _validator(schema_name):
    schemas_dir = None
    for root in (Path.cwd(), _REPO_ROOT):
        if (root / "schemas" / (schema_name + ".json")).is_file():
            schemas_dir = root / "schemas"
            break
    if schemas_dir is None:
        raise UsageError(f"schema {schema_name}.json not found under ./schemas or the checkout")
    schema = json.loads((schemas_dir / (schema_name + ".json")).read_text())
    resources = []
    for path in sorted(schemas_dir.glob("*.json")):
        contents = json.loads(path.read_text())
        if "$id" in contents:
            resources.append((contents["$id"], Resource.from_contents(contents)))
    return jsonschema.Draft202012Validator(schema, registry=Registry().with_resources(resources))


def _load_validated(source, schema_name):
    if source != "-" and not Path(source).is_file():
        found = _find_shipped("fixtures", source if source.endswith(".json") else source + ".json")
        if found is not None:
            source = str(found)
    try:
        doc = json.loads(_read_source(source))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{source}: not valid JSON: {exc}") from None
    errors = sorted(_validator(schema_name).iter_errors(doc), key=lambda e: e.json_path)
    if errors:
        first = errors[0]
        raise UsageError(
            f"{source}: does not match schemas/{schema_name}.json: "
            f"{first.message} (at {first.json_path})"
        )
    return doc


def _pair(values):
    return [rat_to_str(values[0]), rat_to_str(values[1])]


# -- link subcommands ----------------------------------------------------------


def _cmd_link(op, source):
    diagram = _load_diagram(source)
    if op == "lk":
        return 0, {
            "n_components": diagram.n_components,
            "linking_matrix": linking_matrix(diagram),
        }
    if op == "split":
        crossingless = iter(ci for ci, f in enumerate(diagram.unknot_flags) if f)
        pieces = []
        for piece in split_pieces(diagram):
            if piece:
                comps = {diagram.component_of[e]
                         for ci in piece for e in diagram.crossings[ci].quad}
                pieces.append({"crossings": sorted(piece), "components": sorted(comps)})
            else:
                pieces.append({"crossings": [], "components": [next(crossingless)]})
        return 0, {"n_pieces": len(pieces), "pieces": pieces}
    if op == "seifert":
        return 0, seifert_matrix(diagram).to_json()
    if op == "signature":
        return 0, {"signature": link_signature(diagram)}
    if op == "mu":
        return 0, {"mu123": mu123(diagram)}
    assert op == "sigma"
    return 0, milnor_to_json(diagram)


# -- manifold subcommands --------------------------------------------------------


def _cmd_manifold(op, source):
    doc = _load_validated(source, _SCHEMA_OF[op])

    if op in ("chi", "phi", "order"):
        w_model = model_from_json(doc["w_model"])
        e = element_from_json(w_model, doc["e"], degree=2)
        if op == "chi":
            return 0, {"chi": _pair(chi(w_model, e))}
        if op == "phi":
            return 0, {"phi": _pair(phi(w_model, e))}
        return 0, {"order": cobordism_order(w_model, e)}

    if op in ("xi", "sphere-bundle"):
        base = model_from_json(doc["base"])
        p1E = element_from_json(base, doc["p1E"], degree=4)
        data = Bundle3Data(base, p1E, rat(doc["signX"]))
        if op == "xi":
            return 0, {"xi": _pair(xi(data))}
        bundle = build_sphere_bundle(data)
        return 0, {
            "total": model_to_json(bundle.total),
            "euler_class": element_to_json(bundle.euler_class),
        }

    if op == "sigma-quasi":
        x_model = model_from_json(doc["x_model"])
        gamma = element_from_json(x_model, doc["gamma"], degree=2)
        data = QuasiEData(x_model, gamma, rat(doc["signX"]), doc.get("m", 1))
        return 0, {
            "sigma": rat_to_str(sigma_quasi(data)),
            "self_linking": rat_to_str(self_linking(x_model, gamma)),
        }

    if op == "sigma-geometric":
        s_model = model_from_json(doc["s_model"])
        normal_euler = element_from_json(s_model, doc["normal_euler"], degree=2)
        data = SeifertGeometricData(rat(doc["signS"]), s_model, normal_euler)
        return 0, {"sigma": rat_to_str(sigma_geometric(data))}

    if op == "haefliger":
        data = FramedHaefligerData(SymmetricForm(doc["form"]), [rat(c) for c in doc["v"]])
        h, is_integer, sigma = haefliger(data)
        return 0, {"H": rat_to_str(h), "is_integer": is_integer, "sigma": rat_to_str(sigma)}

    assert op == "eclass-solve"
    matrix = [[rat(x) for x in row] for row in doc["matrix"]]
    if any(len(row) != len(matrix[0]) for row in matrix):
        raise UsageError("matrix rows must all have the same length")
    target = [rat(x) for x in doc["target"]]
    if len(target) != len(matrix):
        raise UsageError("target length must match the number of matrix rows")
    solution = eclass_solve(matrix, target, ker_ix_dim=doc.get("ker_ix_dim"))
    out = solution.to_json()
    if solution.dimension is not None:
        out["dimension"] = solution.dimension
    return 0, out


# -- verification suites ---------------------------------------------------------
#
# Every suite reports the same shape: the identity checked, the instance
# counts, and a `failures` list carrying each counterexample verbatim (in the
# same JSON form the manifold subcommands accept, where applicable).  Exit
# code 0 means the failures list is empty.


def _suite_payload(name, identity, seed, fixtures, random_instances, checks, failures):
    return {
        "suite": name,
        "identity": identity,
        "seed": seed,
        "fixtures": fixtures,
        "random_instances": random_instances,
        "checks": checks,
        "failures": failures,
    }


def _random_symmetric(gen, r, bound=3):
    pairing = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(i, r):
            c = gen.int_between(-bound, bound)
            pairing[i][j] = pairing[j][i] = c
    return pairing


def _random_bundle(gen, tag):
    r = gen.below(3)
    pairing = _random_symmetric(gen, r)
    sign_x = signature(pairing)
    base = synthetic_four_manifold(tag, pairing, sign_x=sign_x)
    coeff = gen.int_between(-9, 9)
    p1E = base.element(4, {"v": coeff} if coeff else {})
    return Bundle3Data(base, p1E, sign_x)


def _bundle_doc(data):
    return {
        "base": model_to_json(data.base),
        "p1E": element_to_json(data.p1E),
        "signX": data.sign_x,
    }


def _quasi_doc(data):
    return {
        "x_model": model_to_json(data.x_model),
        "gamma": element_to_json(data.gamma),
        "signX": data.sign_x,
        "m": data.m,
    }


def _random_gamma(gen, model, labels):
    coeffs = {}
    for label in labels:
        c = gen.int_between(-3, 3)
        if c:
            coeffs[label] = c
    return model.element(2, coeffs)


def _suite_chi_upsilon_xi(seed):
    checks, failures = 0, []
    fixture_names = ["u0", "u1"]
    cases = []
    for name in fixture_names:
        doc = _load_validated(name, "bundle3_input")
        base = model_from_json(doc["base"])
        p1E = element_from_json(base, doc["p1E"], degree=4)
        cases.append((name, Bundle3Data(base, p1E, rat(doc["signX"]))))
    gen = Lcg(seed)
    for i in range(100):
        cases.append((f"random[{i}]", _random_bundle(gen, f"r{i}")))
    for name, data in cases:
        bundle = build_sphere_bundle(data)
        lhs = chi(bundle.total, bundle.euler_class)
        rhs = xi(data)
        checks += 1
        if lhs != rhs:
            failures.append({
                "instance": name,
                "input": _bundle_doc(data),
                "chi": _pair(lhs),
                "xi": _pair(rhs),
            })
    payload = _suite_payload(
        "chi-upsilon-xi", "chi(sphere_bundle(u)) == xi(u)", seed,
        fixture_names, 100, checks, failures,
    )
    return (1 if failures else 0), payload


def _suite_normal_sphere(seed):
    checks, failures = 0, []
    for s in range(-16, 17):
        expected = (Fraction(s), Fraction(-3 * s))
        checks += 1
        try:
            value = normal_sphere_chi(s)
        except AssertionError as exc:
            failures.append({"signX": s, "error": str(exc)})
            continue
        if value != expected:
            failures.append({"signX": s, "chi": _pair(value), "expected": _pair(expected)})
    payload = _suite_payload(
        "normal-sphere", "normal_sphere_chi(s) == (s, -3*s) for s in [-16, 16]", seed,
        [], 0, checks, failures,
    )
    payload["range"] = [-16, 16]
    return (1 if failures else 0), payload


def _suite_sign_4lambda(seed):
    checks, failures = 0, []
    gen = Lcg(seed)
    for i in range(100):
        r = 1 + gen.below(3)
        pairing = _random_symmetric(gen, r)
        x_model = synthetic_four_manifold(f"x{i}", pairing)
        labels = [f"x{k + 1}" for k in range(r)]
        gamma = _random_gamma(gen, x_model, labels)
        lam = self_linking(x_model, gamma)
        assert lam.denominator == 1  # integer coefficients and pairing

        # the checker must accept Sign X = 4*Lambda and reject an off-by-one
        expectations = [
            ("accept", int(4 * lam), True),
            ("reject", int(4 * lam) + 1, False),
        ]
        for tag, sign_x, wanted in expectations:
            verdict = check_sign_eq_4lambda(x_model, gamma, sign_x)
            checks += 1
            if verdict.passed is not wanted:
                failures.append({
                    "instance": f"random[{i}]/{tag}",
                    "input": _quasi_doc(QuasiEData(x_model, gamma, sign_x)),
                    "verdict": verdict.to_json(),
                })

        # doubling with the orientation reversal kills both sides
        reversed_model = x_model.reversed_orientation(f"y{i}")
        union = disjoint_union([x_model, reversed_model])
        doubled = union.element(2, {
            f"{label}@{part}": c
            for label, c in gamma.coeffs.items()
            for part in (x_model.name, reversed_model.name)
        })
        verdict = check_sign_eq_4lambda(union, doubled, 0)
        checks += 1
        if not verdict.passed:
            failures.append({
                "instance": f"random[{i}]/doubled",
                "input": _quasi_doc(QuasiEData(union, doubled, 0)),
                "verdict": verdict.to_json(),
            })
    payload = _suite_payload(
        "sign-4lambda", "check_sign_eq_4lambda accepts SignX == 4*Lambda and nothing else",
        seed, [], 100, checks, failures,
    )
    return (1 if failures else 0), payload


def _suite_milnor_identity(seed):
    checks, failures = 0, []
    fixture_names = ["unlink3", "borromean", "mirror_borromean"]
    for name in fixture_names:
        path = _find_shipped("fixtures", name + ".pd")
        if path is None:
            raise UsageError(f"fixture {name}.pd not found under ./fixtures or the checkout")
        diagram = parse_pd(path.read_text())
        mu = mu123(diagram)
        sigma = sigma_of_link(diagram)
        checks += 1
        if sigma != -8 * mu:
            failures.append({
                "instance": name,
                "mu123": mu,
                "sigma": rat_to_str(sigma),
            })
    gen = Lcg(seed)
    mus = list(range(-3, 4)) + [gen.int_between(-20, 20) for _ in range(100)]
    for k, mu in enumerate(mus):
        data, sigma = milnor_sigma_model(mu)
        checks += 2
        if sigma != -8 * mu or sigma_quasi(data) != sigma:
            failures.append({
                "instance": f"model[{k}]",
                "mu123": mu,
                "sigma": rat_to_str(sigma),
                "sigma_quasi": rat_to_str(sigma_quasi(data)),
                "input": _quasi_doc(data),
            })
    payload = _suite_payload(
        "milnor-identity", "sigma_of_link(L) == -8*mu123(L) and sigma(model(mu)) == -8*mu",
        seed, fixture_names, 100, checks, failures,
    )
    return (1 if failures else 0), payload


def _random_quasi(gen, tag, m):
    r = 1 + gen.below(3)
    pairing = _random_symmetric(gen, r)
    model = synthetic_four_manifold(tag, pairing)
    gamma = _random_gamma(gen, model, [f"x{k + 1}" for k in range(r)])
    sign_x = gen.int_between(-6, 6)
    return QuasiEData(model, gamma, sign_x, m)


def _suite_additivity(seed):
    checks, failures = 0, []
    gen = Lcg(seed)
    for i in range(100):
        m = 1 + gen.below(3)
        a = _random_quasi(gen, f"a{i}", m)
        b = _random_quasi(gen, f"b{i}", m)
        union = disjoint_union([a.x_model, b.x_model])
        gamma = union.element(2, {
            **{f"{label}@{a.x_model.name}": c for label, c in a.gamma.coeffs.items()},
            **{f"{label}@{b.x_model.name}": c for label, c in b.gamma.coeffs.items()},
        })
        joined = QuasiEData(union, gamma, a.sign_x + b.sign_x, m)
        checks += 1
        if sigma_quasi(joined) != sigma_quasi(a) + sigma_quasi(b):
            failures.append({
                "instance": f"random[{i}]/union",
                "input": _quasi_doc(joined),
                "sigma": rat_to_str(sigma_quasi(joined)),
                "expected": rat_to_str(sigma_quasi(a) + sigma_quasi(b)),
            })
        reversed_model = a.x_model.reversed_orientation()
        reversed_data = QuasiEData(
            reversed_model,
            reversed_model.element(2, dict(a.gamma.coeffs)),
            -a.sign_x,
            m,
        )
        checks += 1
        if sigma_quasi(reversed_data) != -sigma_quasi(a):
            failures.append({
                "instance": f"random[{i}]/reversed",
                "input": _quasi_doc(reversed_data),
                "sigma": rat_to_str(sigma_quasi(reversed_data)),
                "expected": rat_to_str(-sigma_quasi(a)),
            })
    payload = _suite_payload(
        "additivity", "sigma(a | b) == sigma(a) + sigma(b) and sigma(-a) == -sigma(a)",
        seed, [], 100, checks, failures,
    )
    return (1 if failures else 0), payload


_SUITE_RUNNERS = {
    "chi-upsilon-xi": _suite_chi_upsilon_xi,
    "normal-sphere": _suite_normal_sphere,
    "sign-4lambda": _suite_sign_4lambda,
    "milnor-identity": _suite_milnor_identity,
    "additivity": _suite_additivity,
}


def _cmd_verify(suite, seed):
    if suite != "all":
        return _SUITE_RUNNERS[suite](seed)
    payloads = []
    worst = 0
    for name in ("chi-upsilon-xi", "normal-sphere", "sign-4lambda", "milnor-identity", "additivity"):
        code, payload = _SUITE_RUNNERS[name](seed)
        worst = max(worst, code)
        payloads.append(payload)
    return worst, {
        "suite": "all",
        "seed": seed,
        "checks": sum(p["checks"] for p in payloads),
        "failures_total": sum(len(p["failures"]) for p in payloads),
        "suites": payloads,
    }


# -- entry point -----------------------------------------------------------------


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        seed, indent, rest = _split_global(argv)
    except UsageError as exc:
        print(f"emfd: {exc}", file=sys.stderr)
        return 2
    try:
        args = _parser().parse_args(rest)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    try:
        if args.group == "link":
            code, payload = _cmd_link(args.op, args.input)
        elif args.group == "manifold":
            code, payload = _cmd_manifold(args.op, args.input)
        else:
            code, payload = _cmd_verify(args.suite, seed)
    except UsageError as exc:
        print(f"emfd: {exc}", file=sys.stderr)
        return 2
    except PDError as exc:
        print(f"emfd: {exc}", file=sys.stderr)
        return 2
    except (MilnorError, ModelError) as exc:
        _emit({"error": str(exc)}, indent)
        print(f"emfd: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError) as exc:
        # bad numeric content that slipped past the schema (e.g. a zero
        # denominator or an asymmetric matrix)
        _emit({"error": str(exc)}, indent)
        print(f"emfd: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"emfd: {exc}", file=sys.stderr)
        return 2

    _emit(payload, indent)
    if code != 0:
        print("emfd: verification failed; see the payload for counterexamples", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
