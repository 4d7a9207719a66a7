"""Command line entry point.

One subcommand per module: parse, nphi, locality, spectrum, schmerl,
stretch, catalog.  Machine-readable JSON goes to standard output (or
--out), a one-line human summary to standard error.  Exit codes: 0
success, 2 usage or input error, 3 incomplete or inconclusive verdict,
4 refutation or counterexample found.  Identical inputs and seeds
yield byte-identical reports; --plot-dir additionally renders figures
for the report-shaped subcommands.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import catalog, plots
from .locality import certify
from .ordinals import parse_ordinal
from .parser import parse_sentence
from .schmerl import holds_P
from .spectrum import finite_spectrum
from .stretching import classify, stretch_prefix, verify_stretch
from .structures import closure, satisfies
from .syntax import compute_N, sentence_text, term_metrics

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INCOMPLETE = 3
EXIT_REFUTED = 4


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _load_sentence(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_sentence(fh.read())


def _load_model(path: str, validate: bool):
    with open(path, "r", encoding="utf-8") as fh:
        record = json.load(fh)
    return catalog.model_from_record(record, validate=validate)


def _emit(doc, args) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _say(message: str) -> None:
    print(message, file=sys.stderr)


def _plot_into(args, render, doc, name: str) -> None:
    if getattr(args, "plot_dir", None):
        os.makedirs(args.plot_dir, exist_ok=True)
        path = os.path.join(args.plot_dir, name)
        render(doc, path)
        _say(f"figure written to {path}")


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_parse(args) -> int:
    sentence = _load_sentence(args.file)
    canonical = sentence_text(sentence)
    round_trip = parse_sentence(canonical) == sentence
    sig = sentence.signature
    doc = {
        "signature": {
            "functions": [[n, a] for n, a in sig.functions],
            "relations": [[n, a] for n, a in sig.relations],
            "constants": list(sig.constants),
        },
        "variables": list(sentence.variables),
        "declared_closure_steps": sentence.declared_closure_steps,
        "canonical": canonical,
        "round_trip": round_trip,
    }
    _emit(doc, args)
    _say(
        f"parsed {args.file}: {len(sentence.variables)} variables, "
        f"{len(sig.functions)} functions, {len(sig.relations)} relations, "
        f"{len(sig.constants)} constants"
    )
    return EXIT_OK


def _cmd_nphi(args) -> int:
    sentence = _load_sentence(args.file)
    steps = args.n if args.n is not None else sentence.declared_closure_steps
    if steps is None:
        _say("no closure step bound: pass --n or declare one in the sentence file")
        return EXIT_USAGE
    n_value = compute_N(sentence, steps)
    v, vprime = term_metrics(sentence, steps)
    text = f"{n_value}\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    _say(
        f"N = {n_value} (q={len(sentence.variables)}, v={v}, v'={vprime}, steps={steps})"
    )
    return EXIT_OK


def _cmd_locality(args) -> int:
    sentence = _load_sentence(args.file)
    declared = args.n if args.n is not None else sentence.declared_closure_steps
    if declared is None:
        _say("no declared step bound: pass --n or declare one in the sentence file")
        return EXIT_USAGE
    report = certify(
        sentence,
        declared,
        args.max_size,
        node_budget=args.budget,
        seed=args.seed,
        samples=args.samples,
        sentence_id=_stem(args.file),
    )
    doc = report.to_json_dict()
    _emit(doc, args)
    _plot_into(args, plots.locality_figure, doc, f"{_stem(args.file)}_locality.png")
    _say(
        f"locality {report.verdict}: max depth {report.max_depth} vs declared "
        f"{declared} over {report.models_checked} models up to size {args.max_size}"
    )
    if report.verdict == "refuted":
        return EXIT_REFUTED
    if not report.complete:
        return EXIT_INCOMPLETE
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    sentence = _load_sentence(args.file)
    result = finite_spectrum(
        sentence,
        args.max_size,
        node_budget=args.budget,
        sentence_id=_stem(args.file),
        allow_unbounded_arity=args.allow_unbounded_arity,
    )
    doc = result.to_json_dict()
    _emit(doc, args)
    _plot_into(args, plots.spectrum_figure, doc, f"{_stem(args.file)}_spectrum.png")
    members = ", ".join(str(s) for s in sorted(result.members)) or "none"
    _say(f"spectrum up to {args.max_size}: {{{members}}}" + ("" if result.complete else " (incomplete)"))
    return EXIT_OK if result.complete else EXIT_INCOMPLETE


def _cmd_schmerl(args) -> int:
    result = holds_P(
        args.k,
        args.n,
        args.alpha,
        mode=args.mode,
        seed=args.seed,
        samples=args.samples,
    )
    _emit(result.to_json_dict(), args)
    _say(
        f"P(k={args.k}, n={args.n}, alpha={args.alpha}): holds={result.holds} "
        f"({result.mode}, {result.note})"
    )
    if not result.holds:
        return EXIT_REFUTED
    if not result.conclusive:
        return EXIT_INCOMPLETE
    return EXIT_OK


def _cmd_stretch(args) -> int:
    model = _load_model(args.model, validate=not args.no_validate)
    indiscernibles = tuple(int(tok) for tok in args.indiscernibles.split(","))
    if list(indiscernibles) != sorted(set(indiscernibles)):
        raise ValueError("indiscernibles must be strictly increasing")
    if indiscernibles and not (0 <= indiscernibles[0] and indiscernibles[-1] < model.size):
        raise ValueError("indiscernibles out of range for the model")
    sentence = _load_sentence(args.sentence) if args.sentence else None
    steps = args.n
    if steps is None and sentence is not None:
        steps = sentence.declared_closure_steps
    if steps is None:
        steps = 1

    closed, _ = closure(model, indiscernibles)
    doc: dict = {
        "indiscernibles": list(indiscernibles),
        "generates": len(closed) == model.size,
        "flags": classify(model, indiscernibles, steps).to_json_dict(),
    }
    code = EXIT_OK
    if args.indices:
        index_set = [parse_ordinal(tok.strip()) for tok in args.indices.split(",")]
        prefix = stretch_prefix(model, indiscernibles, index_set, steps)
        doc["prefix"] = prefix.to_json_dict()
        if sentence is not None:
            ok = satisfies(prefix.structure, sentence)
            doc["prefix_satisfies"] = ok
            if not ok:
                code = EXIT_REFUTED
    if args.budget is not None:
        if sentence is None:
            _say("--budget needs --sentence")
            return EXIT_USAGE
        report = verify_stretch(sentence, model, indiscernibles, args.budget)
        doc["verify"] = report.to_json_dict()
        if report.verdict == "refuted":
            code = EXIT_REFUTED
        elif not report.exhaustive and code == EXIT_OK:
            code = EXIT_INCOMPLETE
    _emit(doc, args)
    summary = f"flags {doc['flags']}"
    if "verify" in doc:
        summary = f"verify {doc['verify']['verdict']} (budget {args.budget})"
    elif "prefix" in doc:
        summary = f"prefix of size {doc['prefix']['size']}"
    _say(f"stretch on {args.model}: {summary}")
    return code


def _cmd_catalog(args) -> int:
    if args.action == "list":
        doc = {
            "entries": [
                {
                    "id": entry.id,
                    "declared_closure_steps": entry.declared_steps,
                    "note": entry.note,
                }
                for entry in catalog.entries()
            ],
            "models": list(catalog.model_ids()),
        }
        _emit(doc, args)
        _say(f"{len(doc['entries'])} sentences, {len(doc['models'])} models")
        return EXIT_OK
    if args.id is None:
        _say("catalog show needs an id")
        return EXIT_USAGE
    try:
        doc = catalog.get(args.id).to_json_dict()
    except KeyError:
        doc = catalog.model_record(args.id)
    _emit(doc, args)
    _say(f"catalog entry {args.id}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Wiring


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="locus",
        description=(
            "workbench for local sentences: parsing, locality certification, "
            "finite spectra, partition properties, and stretched-model prefixes"
        ),
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a sentence file and echo its canonical form")
    p.add_argument("file")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(run=_cmd_parse)

    p = sub.add_parser("nphi", help="print the indiscernible-count bound N")
    p.add_argument("file")
    p.add_argument("--n", type=int, help="closure step bound (defaults to the declared one)")
    p.add_argument("--out")
    p.set_defaults(run=_cmd_nphi)

    p = sub.add_parser("locality", help="survey closure behavior of all small models")
    p.add_argument("file")
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--n", type=int, help="declared step bound to certify against")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=64, help="subset samples for large models")
    p.add_argument("--budget", type=int, help="search node budget")
    p.add_argument("--out")
    p.add_argument("--plot-dir", help="also render a depth-by-size figure here")
    p.set_defaults(run=_cmd_locality)

    p = sub.add_parser("spectrum", help="decide model existence at every size up to a bound")
    p.add_argument("file")
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--budget", type=int, help="search node budget per size")
    p.add_argument(
        "--allow-unbounded-arity",
        action="store_true",
        help="permit blind search over functions of arity above 2",
    )
    p.add_argument("--out")
    p.add_argument("--plot-dir", help="also render a membership figure here")
    p.set_defaults(run=_cmd_spectrum)

    p = sub.add_parser("schmerl", help="evaluate the finite partition property P(n, alpha) at base size k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--mode", choices=["auto", "exhaustive", "sampled"], default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--out")
    p.set_defaults(run=_cmd_schmerl)

    p = sub.add_parser("stretch", help="classify indiscernibles and materialize stretched prefixes")
    p.add_argument("model", help="model record JSON (explicit structure or segment recipe)")
    p.add_argument("--indiscernibles", required=True, help="comma-separated increasing elements")
    p.add_argument("--indices", help='comma-separated ordinals, e.g. "0,w,w*2"')
    p.add_argument("--sentence", help="sentence file to check on prefixes")
    p.add_argument("--n", type=int, help="term complexity bound (defaults to the sentence's declared steps)")
    p.add_argument("--budget", type=int, help="verify prefixes of every size up to this budget")
    p.add_argument("--no-validate", action="store_true", help="skip recipe validation when loading")
    p.add_argument("--out")
    p.set_defaults(run=_cmd_stretch)

    p = sub.add_parser("catalog", help="browse the shipped sentences and models")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("id", nargs="?")
    p.add_argument("--out")
    p.set_defaults(run=_cmd_catalog)

    return top


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    try:
        return args.run(args)
    except (ValueError, KeyError, OSError) as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
