#!/usr/bin/env python3
"""Regenerate data/gazetteer.tsv from the Faker English name providers.

Frequency-weighted lists (en_US, then en_NZ, en_GB, en_KE) are ranked by
weight; the unweighted lists (en, en_IE) are appended in their published
order until each table reaches its target size.

    pip install faker
    python3 tools/gen_gazetteer.py > data/gazetteer.tsv
"""
import importlib

TARGET_FIRST_PER_GENDER = 5000
TARGET_LAST = 2000


def provider(locale):
    return importlib.import_module(f"faker.providers.person.{locale}").Provider


def ordered(names):
    if hasattr(names, "items"):
        return [n for n, _ in sorted(names.items(), key=lambda kv: -kv[1])]
    return list(names)


def clean(name):
    name = name.strip()
    if not name or not all(c.isalpha() or c in "'-" for c in name):
        return None
    if not name.isascii():
        return None
    return name.lower()


def collect(attr, locales, target):
    out, seen = [], set()
    for loc in locales:
        for n in ordered(getattr(provider(loc), attr, None) or []):
            n = clean(n)
            if n and n not in seen:
                seen.add(n)
                out.append(n)
                if len(out) >= target:
                    return out
    return out


def main():
    locales = ["en_US", "en_NZ", "en_GB", "en_KE", "en", "en_IE"]
    male = collect("first_names_male", locales, TARGET_FIRST_PER_GENDER)
    female = collect("first_names_female", locales, TARGET_FIRST_PER_GENDER)
    last = collect("last_names", locales, TARGET_LAST)

    both = set(male) & set(female)
    rows = []
    ranks = {"male": 0, "female": 0, "unisex": 0}
    firsts = []
    # Interleave so unisex ranks follow overall popularity.
    for i in range(max(len(male), len(female))):
        for lst in (male, female):
            if i < len(lst):
                firsts.append(lst[i])
    seen = set()
    for n in firsts:
        if n in seen:
            continue
        seen.add(n)
        g = "unisex" if n in both else ("male" if n in male else "female")
        ranks[g] += 1
        rows.append((n, "first", g, ranks[g]))
    for i, n in enumerate(last, 1):
        rows.append((n, "last", "unknown", i))

    print("name\tpart\tgender\trank\tera")
    for n, part, g, r in rows:
        print(f"{n}\t{part}\t{g}\t{r}\t-")


if __name__ == "__main__":
    main()
