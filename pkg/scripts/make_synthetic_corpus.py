#!/usr/bin/env python3
"""Generate a deterministic synthetic corpus with learnable analogy structure.

Background tokens follow a bounded Zipf distribution; interleaved template
sentences tie word pairs together (capital/country, currency/country,
adjective/comparative, singular/plural) so that offset-style analogies are
recoverable from co-occurrence statistics alone. Alongside the corpus a
matching analogy-question file is written with two semantic and two
syntactic categories.

Usage:
    python3 scripts/make_synthetic_corpus.py --out corpus.txt \
        --questions-out questions.txt --size-mb 5 --seed 0
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

CAPITALS = [
    ("athens", "greece"), ("baghdad", "iraq"), ("bangkok", "thailand"),
    ("beijing", "china"), ("berlin", "germany"), ("bern", "switzerland"),
    ("cairo", "egypt"), ("canberra", "australia"), ("hanoi", "vietnam"),
    ("havana", "cuba"), ("helsinki", "finland"), ("kabul", "afghanistan"),
    ("london", "england"), ("madrid", "spain"), ("moscow", "russia"),
    ("oslo", "norway"), ("ottawa", "canada"), ("paris", "france"),
    ("rome", "italy"), ("tokyo", "japan"), ("vientiane", "laos"),
]

CURRENCIES = [
    ("algeria", "dinar"), ("argentina", "peso"), ("brazil", "cruzeiro"),
    ("bulgaria", "lev"), ("cambodia", "riel"), ("croatia", "kuna"),
    ("denmark", "krone"), ("europe", "euro"), ("hungary", "forint"),
    ("india", "rupee"), ("iran", "rial"), ("japan", "yen"),
    ("korea", "won"), ("malaysia", "ringgit"), ("russia", "ruble"),
    ("sweden", "krona"), ("thailand", "baht"), ("ukraine", "hryvnia"),
]

COMPARATIVES = [
    ("big", "bigger"), ("bright", "brighter"), ("cheap", "cheaper"),
    ("cold", "colder"), ("deep", "deeper"), ("fast", "faster"),
    ("hard", "harder"), ("heavy", "heavier"), ("high", "higher"),
    ("long", "longer"), ("loud", "louder"), ("old", "older"),
    ("sharp", "sharper"), ("slow", "slower"), ("small", "smaller"),
    ("strong", "stronger"), ("tall", "taller"), ("warm", "warmer"),
]

PLURALS = [
    ("bird", "birds"), ("bottle", "bottles"), ("building", "buildings"),
    ("car", "cars"), ("cat", "cats"), ("child", "children"),
    ("cloud", "clouds"), ("dog", "dogs"), ("dollar", "dollars"),
    ("eagle", "eagles"), ("hand", "hands"), ("horse", "horses"),
    ("house", "houses"), ("lion", "lions"), ("man", "men"),
    ("mouse", "mice"), ("road", "roads"), ("snake", "snakes"),
    ("song", "songs"), ("woman", "women"),
]

FAMILIES = {
    "capital-common-countries": CAPITALS,
    "currency": CURRENCIES,
    "gram3-comparative": COMPARATIVES,
    "gram4-plural": PLURALS,
}

_CAPITAL_TEMPLATES = [
    "{b} is the capital of {a}",
    "the capital city of {a} is {b}",
    "travelers reach {a} through {b}",
]
_CURRENCY_TEMPLATES = [
    "the {b} is the currency of {a}",
    "prices in {a} are quoted in {b}",
]
_COMPARATIVE_TEMPLATES = [
    "this one is {b} than that {a} one",
    "it grew {b} although it was already {a}",
]
_PLURAL_TEMPLATES = [
    "one {a} or many {b}",
    "the {b} followed a single {a}",
]
_TEMPLATES = {
    "capital-common-countries": _CAPITAL_TEMPLATES,
    "currency": _CURRENCY_TEMPLATES,
    "gram3-comparative": _COMPARATIVE_TEMPLATES,
    "gram4-plural": _PLURAL_TEMPLATES,
}

BACKGROUND_TYPES = 6000
ZIPF_EXPONENT = 1.07
ZIPF_SHIFT = 2.7


def _background_names(n: int) -> list[str]:
    names = []
    for i in range(n):
        digits, k = "", i
        while True:
            digits = chr(ord("a") + k % 26) + digits
            k //= 26
            if k == 0:
                break
        names.append("q" + digits)
    return names


def generate(out: Path, questions_out: Path, size_mb: float = 5.0, seed: int = 0,
             max_per_category: int = 300) -> None:
    rng = np.random.default_rng(seed)
    names = _background_names(BACKGROUND_TYPES)
    ranks = np.arange(1, BACKGROUND_TYPES + 1, dtype=np.float64)
    probs = 1.0 / (ranks + ZIPF_SHIFT) ** ZIPF_EXPONENT
    probs /= probs.sum()
    family_keys = list(FAMILIES)
    target_bytes = int(size_mb * 1024 * 1024)

    written = 0
    with open(out, "w", encoding="utf-8") as fh:
        while written < target_bytes:
            # One chunk = a batch of sentences; draw the batch layout up front
            # so the background sampler runs vectorized.
            kinds = rng.random(2000)
            n_back = int((kinds < 0.5).sum())
            back_lens = rng.integers(8, 19, size=n_back)
            back_ids = rng.choice(BACKGROUND_TYPES, size=int(back_lens.sum()), p=probs)
            pos = 0
            bi = 0
            lines = []
            for kind in kinds:
                if kind < 0.5:
                    length = int(back_lens[bi]); bi += 1
                    lines.append(" ".join(names[j] for j in back_ids[pos:pos + length]))
                    pos += length
                else:
                    fam = family_keys[int(rng.integers(len(family_keys)))]
                    pairs = FAMILIES[fam]
                    a, b = pairs[int(rng.integers(len(pairs)))]
                    tpl = _TEMPLATES[fam][int(rng.integers(len(_TEMPLATES[fam])))]
                    lines.append(tpl.format(a=a, b=b))
            chunk = "\n".join(lines) + "\n"
            fh.write(chunk)
            written += len(chunk.encode("utf-8"))

    with open(questions_out, "w", encoding="utf-8") as fh:
        for fam in family_keys:
            pairs = FAMILIES[fam]
            combos = [(i, j) for i in range(len(pairs)) for j in range(len(pairs)) if i != j]
            rng.shuffle(combos)
            fh.write(f": {fam}\n")
            for i, j in combos[:max_per_category]:
                a, b = pairs[i]
                c, d = pairs[j]
                fh.write(f"{a} {b} {c} {d}\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, required=True)
    ap.add_argument("--questions-out", type=Path, required=True)
    ap.add_argument("--size-mb", type=float, default=5.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-per-category", type=int, default=300)
    args = ap.parse_args()
    generate(args.out, args.questions_out, args.size_mb, args.seed, args.max_per_category)
    print(f"wrote {args.out} ({args.out.stat().st_size} bytes) and {args.questions_out}")


if __name__ == "__main__":
    main()
