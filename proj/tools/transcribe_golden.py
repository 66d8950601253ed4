#!/usr/bin/env python3
"""Transcribe the printed formula listing of the source text into golden JSON files.

Each printed formula f_k^{(M,d)} (slices) or g_k^{(M,d)} (slabs) is cut out of
the LaTeX, cleaned, parsed with sympy and written as a RatFunc in the library's
serialization format (vars a1..ad, t; num/den as [exponents, coefficient]).

usage: transcribe_golden.py SOURCE.md OUT_DIR
"""

import json
import re
import sys
from pathlib import Path

import sympy
from sympy.parsing.latex import parse_latex

LABEL = re.compile(r"([fg])_\{?(\d+)\}?\^\{\((\d+),(\d+)\)\}\s*(?:&\s*)?=")
STOP = re.compile(r"\\end\{(align\*|cases)\}")

DROP = [
    r"\\setlength\{\\jot\}\{[^}]*\}",
    r"\\begin\{aligned\}",
    r"\\end\{aligned\}",
    r"\\\\\[[^\]]*\]",
    r"\\\\",
    r"\\(?:bigg|Bigg|big|Big)[lr]?",
    r"\\left",
    r"\\right",
    r"\\qquad",
    r"\\quad",
    r"\\medskip",
    r"\\displaystyle",
    r"\\[,!; ]",
    r"&",
]


def drop_phantoms(s: str) -> str:
    out, i = [], 0
    while True:
        j = s.find(r"\phantom{", i)
        if j < 0:
            out.append(s[i:])
            return "".join(out)
        out.append(s[i:j])
        depth, k = 0, j + len(r"\phantom")
        while True:
            depth += {"{": 1, "}": -1}.get(s[k], 0)
            k += 1
            if depth == 0:
                break
        i = k


def clean(body: str) -> str:
    s = drop_phantoms(body)
    # inside a cases environment the formula ends before ", & range"
    m = re.search(r",\s*&", s)
    if m:
        s = s[: m.start()]
    for pat in DROP:
        s = re.sub(pat, " ", s)
    s = s.replace(r"\dfrac", r"\frac").replace(r"\tfrac", r"\frac")
    s = s.replace("[", "(").replace("]", ")")
    s = s.replace(",", " ")
    # "t(...)" is a product, not a function application
    s = re.sub(r"(?<![A-Za-z\\])t\s*\(", r"t \\cdot (", s)
    s = s.strip().rstrip(".").strip()
    return s


def ring(d):
    return [sympy.Symbol(f"a{i}") for i in range(1, d + 1)] + [sympy.Symbol("t")]


def to_ratfunc(expr, d):
    gens = ring(d)
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))

    def terms(p):
        poly = sympy.Poly(sympy.expand(p), *gens)
        return [[list(m), str(sympy.Rational(c))] for m, c in poly.terms()]

    return {"vars": [str(g) for g in gens], "num": terms(num), "den": terms(den)}


def parse(text, d):
    e = parse_latex(text)
    subs = {sympy.Symbol(f"a_{{{i}}}"): sympy.Symbol(f"a{i}") for i in range(1, d + 1)}
    subs.update({sympy.Symbol(f"a_{i}"): sympy.Symbol(f"a{i}") for i in range(1, d + 1)})
    e = e.subs(subs)
    allowed = set(ring(d))
    extra = e.free_symbols - allowed
    if extra:
        raise ValueError(f"unexpected symbols {extra}")
    return e


def main():
    src, out = Path(sys.argv[1]), Path(sys.argv[2])
    text = src.read_text()
    start = text.index(r"\section{Appendix}")
    app = text[start:]
    base_line = text[:start].count("\n") + 1

    labels = list(LABEL.finditer(app))
    files = {}
    for i, m in enumerate(labels):
        kind, k, M, d = m.group(1), int(m.group(2)), int(m.group(3)), int(m.group(4))
        end = labels[i + 1].start() if i + 1 < len(labels) else len(app)
        stop = STOP.search(app, m.end(), end)
        if stop:
            end = stop.start()
        body = app[m.end():end]
        line = base_line + app[: m.start()].count("\n")
        name = f"{kind}_{k}^({M},{d})"
        cleaned = clean(body)
        try:
            rf = to_ratfunc(parse(cleaned, d), d)
        except Exception as exc:  # report and keep going; the file will lack this entry
            print(f"{name} (line {line}): {exc}", file=sys.stderr)
            continue
        obj = "slice" if kind == "f" else "slab"
        entry = {
            "name": name,
            "M": M,
            "k": k,
            "transcribed_from": f"appendix, source line {line}",
            "latex": " ".join(cleaned.split()),
            "ratfunc": rf,
        }
        files.setdefault((d, obj), []).append(entry)

    out.mkdir(parents=True, exist_ok=True)
    for (d, obj), entries in sorted(files.items()):
        path = out / f"cube{d}_{obj}.json"
        doc = {"ball": "cube", "dim": d, "object": obj, "formulas": entries}
        if obj == "slab" and d <= 3:
            # stated in the text: odd moments of centrally symmetric slabs vanish
            doc["zero_moments"] = [1, 3]
        if path.exists():
            # keep hand-written errata notes across regenerations
            old = json.loads(path.read_text())
            notes = {e["name"]: e["erratum"] for e in old.get("formulas", []) if "erratum" in e}
            for e in entries:
                if e["name"] in notes:
                    e["erratum"] = notes[e["name"]]
        path.write_text(json.dumps(doc, indent=1) + "\n")
        print(f"{path}: {len(entries)} formulas")


if __name__ == "__main__":
    main()
