"""Straightforward re-computation of the per-song and aggregate style tables.

Deliberately independent of the library: it re-implements tokenization,
syllable counting, and every metric inline with the most direct code
possible, so its output can serve as an oracle for the pipeline's CSVs.

Usage: python tools/recompute_style.py corpus.csv out_dir/
"""

import csv
import os
import re
import sys
import unicodedata
from collections import defaultdict

HERE = os.path.dirname(os.path.abspath(__file__))
SWEAR_FILE = os.path.join(HERE, "..", "src", "lyricstats", "data", "swear_words.txt")


def load_swears():
    words = set()
    with open(SWEAR_FILE, encoding="utf-8") as fh:
        for line in fh:
            w = line.split("#", 1)[0].strip()
            if w:
                words.add(w)
    return words


def tokenize_lines(lyrics):
    text = unicodedata.normalize("NFC", lyrics).lower()
    lines = []
    for raw in text.split("\n"):
        raw = raw.strip()
        if not raw or re.match(r"^\[[^\[\]]*\]$", raw):
            continue
        toks = []
        for w in raw.split():
            w = re.sub(r"^[\W_]+", "", re.sub(r"[\W_]+$", "", w))
            if w:
                toks.append(w)
        if toks:
            lines.append(toks)
    return lines


def syllables(word):
    n = len(re.findall(r"[aeiouy]+", word))
    if word.endswith("e") and not word.endswith("le"):
        n -= 1
    return max(n, 1)


def song_metrics(lines, duration, swears):
    tokens = [t for line in lines for t in line]
    length = len(tokens)
    spd = None if duration is None else length / duration
    joined = [" ".join(line) for line in lines]
    rep = (1 - len(set(joined)) / len(joined)) * 100
    syl = sum(syllables(t) for t in tokens)
    fk = 0.39 * (length / len(lines)) + 11.8 * (syl / length) - 15.59
    sc = sum(1 for t in tokens if t in swears)
    return length, spd, rep, fk, sc, sc / length


def fmt(x):
    return "" if x is None else (f"{x:.9f}" if isinstance(x, float) else str(x))


def main(corpus_path, out_dir):
    swears = load_swears()
    os.makedirs(out_dir, exist_ok=True)
    songs = []
    with open(corpus_path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            duration = float(row["duration_seconds"]) if row["duration_seconds"] else None
            lines = tokenize_lines(row["lyrics"].replace("\\n", "\n"))
            songs.append((row["id"], int(row["year"]), row["cohort"], duration, lines))

    per_song_rows = []
    cells = defaultdict(list)
    for sid, year, cohort, duration, lines in songs:
        length, spd, rep, fk, sc, sr = song_metrics(lines, duration, swears)
        per_song_rows.append([sid, year, cohort, length, fmt(duration), fmt(spd), fmt(rep), fmt(fk), sc, fmt(sr)])
        cells[(year, cohort)].append((length, duration, spd, rep, fk, sc, sr))

    with open(os.path.join(out_dir, "per_song.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["song_id", "year", "cohort", "length_words", "duration_seconds", "speed_wps",
                    "repetitiveness_pct", "fk_grade", "swear_count", "swear_rate"])
        w.writerows(per_song_rows)

    with open(os.path.join(out_dir, "aggregate.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["year", "cohort", "song_count", "mean_length_words", "mean_duration_seconds",
                    "duration_coverage", "mean_speed_wps", "mean_repetitiveness_pct",
                    "mean_fk_grade", "mean_swear_count", "mean_swear_rate"])
        for (year, cohort) in sorted(cells):
            rows = cells[(year, cohort)]
            n = len(rows)
            with_dur = [r for r in rows if r[1] is not None]
            mean = lambda vals: sum(vals) / len(vals) if vals else None
            w.writerow([
                year, cohort, n,
                fmt(sum(r[0] for r in rows) / n),
                fmt(mean([r[1] for r in with_dur])),
                len(with_dur),
                fmt(mean([r[2] for r in with_dur])),
                fmt(sum(r[3] for r in rows) / n),
                fmt(sum(r[4] for r in rows) / n),
                fmt(sum(r[5] for r in rows) / n),
                fmt(sum(r[6] for r in rows) / n),
            ])
    print(f"recomputed {len(songs)} songs -> {out_dir}")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
