"""Author the bundled 50-song synthetic mini-corpus.

Deterministic: re-running reproduces the committed CSV byte for byte.
Composition (the oracle for ingestion tests): 50 songs, 10 popular and
40 other, years drawn from {1965, 1975, 1985, 1995, 2005, 2015}, five
songs without a duration, a handful of songs carrying section
annotations and swear words.

Usage: python tools/make_mini_corpus.py [out.csv]
"""

import csv
import random
import sys

SEED = 20190721

WORD_POOLS = {
    1965: ["love", "baby", "heart", "blues", "tonight", "hold", "dance", "sweet", "dream", "mine"],
    1975: ["love", "rock", "night", "fire", "blues", "road", "shine", "free", "soul", "time"],
    1985: ["love", "rock", "night", "heart", "city", "lights", "run", "wild", "beat", "radio"],
    1995: ["love", "rock", "life", "real", "streets", "flow", "pain", "mind", "game", "shine"],
    2005: ["love", "club", "rock", "shawty", "ride", "money", "phone", "floor", "glow", "low"],
    2015: ["love", "night", "work", "money", "gold", "city", "phone", "wave", "young", "lights"],
}
SWEARS = ["damn", "hell"]
FILLER = ["the", "and", "you", "me", "in", "my", "on", "we", "it", "so", "don't", "can't"]


def make_line(rng, year, swear_chance):
    pool = WORD_POOLS[year]
    n = rng.randint(4, 8)
    words = [rng.choice(pool if rng.random() < 0.5 else FILLER) for _ in range(n)]
    if rng.random() < swear_chance:
        words[rng.randrange(n)] = rng.choice(SWEARS)
    return " ".join(words)


def make_song(rng, idx, year, cohort):
    n_verse = rng.randint(4, 8)
    chorus = [make_line(rng, year, 0.0) for _ in range(2)]
    swear_chance = 0.15 if (cohort == "other" or year >= 1995) else 0.05
    lines = []
    if idx % 7 == 0:
        lines.append("[Intro]")
    for _ in range(n_verse):
        lines.append(make_line(rng, year, swear_chance))
    if idx % 7 == 0:
        lines.append("[Chorus]")
    repeats = rng.randint(1, 3)
    for _ in range(repeats):
        lines.extend(chorus)
    duration = None if idx % 10 == 3 else round(rng.uniform(150, 330), 1)
    return {
        "id": f"s{idx:03d}",
        "title": f"Song {idx}",
        "artist": f"Artist {idx % 13}",
        "year": year,
        "duration_seconds": "" if duration is None else duration,
        "cohort": cohort,
        "lyrics": "\\n".join(lines),
    }


def main(out_path):
    rng = random.Random(SEED)
    years = [1965, 1975, 1985, 1995, 2005, 2015]
    rows = []
    for idx in range(50):
        cohort = "popular" if idx < 10 else "other"
        year = years[idx % len(years)]
        rows.append(make_song(rng, idx, year, cohort))
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["id", "title", "artist", "year", "duration_seconds", "cohort", "lyrics"]
        )
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} songs -> {out_path}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/lyricstats/data/mini_corpus.csv")
