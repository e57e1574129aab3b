#!/usr/bin/env python3
# Copyright 2026 The GeoSeek Toolkit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Synthetic prediction/truth pairs with distance-correlated text corruption.

Each pair plants a great-circle error d (log-uniform, 1 to 6000 km) and
derives the predicted address from it: the further off the prediction, the
likelier each level names a different place from the pool. Independently of
distance, a correctly named level may be written as a surface variant
(spelling slip, missing diacritic, administrative suffix, alternate name),
which strict text equality cannot see through.

    python3 make_reward_corpus.py > data/synthetic/reward_corpus.jsonl
"""

import argparse
import json
import math
import random
import unicodedata

# country, region, precise, lat, lon
PLACES = [
    ("France", "Île-de-France", "Paris", 48.8566, 2.3522),
    ("France", "Provence-Alpes-Côte d'Azur", "Marseille", 43.2965, 5.3698),
    ("Italy", "Lazio", "Rome", 41.9028, 12.4964),
    ("Italy", "Lombardy", "Milan", 45.4642, 9.1900),
    ("Spain", "Catalonia", "Barcelona", 41.3874, 2.1686),
    ("Spain", "Andalusia", "Seville", 37.3891, -5.9845),
    ("Germany", "Bavaria", "Munich", 48.1351, 11.5820),
    ("Germany", "Hamburg", "Hamburg", 53.5511, 9.9937),
    ("Poland", "Lesser Poland", "Kraków", 50.0647, 19.9450),
    ("Norway", "Vestland", "Bergen", 60.3913, 5.3221),
    ("Iceland", "Capital Region", "Reykjavík", 64.1466, -21.9426),
    ("Turkey", "Istanbul", "Beyoğlu", 41.0370, 28.9770),
    ("Egypt", "Cairo Governorate", "Cairo", 30.0444, 31.2357),
    ("Morocco", "Marrakesh-Safi", "Marrakesh", 31.6295, -7.9811),
    ("Kenya", "Nairobi County", "Nairobi", -1.2921, 36.8219),
    ("South Africa", "Western Cape", "Cape Town", -33.9249, 18.4241),
    ("Nigeria", "Lagos State", "Ikeja", 6.6018, 3.3515),
    ("India", "Maharashtra", "Mumbai", 19.0760, 72.8777),
    ("India", "Rajasthan", "Jaipur", 26.9124, 75.7873),
    ("Thailand", "Chiang Mai Province", "Chiang Mai", 18.7883, 98.9853),
    ("Vietnam", "Hanoi", "Hoàn Kiếm", 21.0285, 105.8542),
    ("Japan", "Kyoto Prefecture", "Kyoto", 35.0116, 135.7681),
    ("Japan", "Hokkaido", "Sapporo", 43.0618, 141.3545),
    ("South Korea", "Busan", "Haeundae", 35.1631, 129.1635),
    ("China", "Sichuan", "Chengdu", 30.5728, 104.0668),
    ("Mongolia", "Ulaanbaatar", "Sükhbaatar", 47.9184, 106.9177),
    ("Indonesia", "Bali", "Ubud", -8.5069, 115.2625),
    ("Australia", "New South Wales", "Sydney", -33.8688, 151.2093),
    ("Australia", "Western Australia", "Perth", -31.9505, 115.8605),
    ("New Zealand", "Otago", "Queenstown", -45.0312, 168.6626),
    ("United States", "California", "San Francisco", 37.7749, -122.4194),
    ("United States", "Texas", "Austin", 30.2672, -97.7431),
    ("United States", "New York", "Manhattan", 40.7831, -73.9712),
    ("Canada", "Quebec", "Montréal", 45.5019, -73.5674),
    ("Canada", "British Columbia", "Vancouver", 49.2827, -123.1207),
    ("Mexico", "Oaxaca", "Oaxaca de Juárez", 17.0732, -96.7266),
    ("Brazil", "Rio de Janeiro", "Copacabana", -22.9711, -43.1822),
    ("Brazil", "Bahia", "Salvador", -12.9777, -38.5016),
    ("Argentina", "Buenos Aires", "Palermo", -34.5889, -58.4300),
    ("Chile", "Santiago Metropolitan", "Providencia", -33.4314, -70.6093),
    ("Peru", "Cusco", "Cusco", -13.5320, -71.9675),
    ("Colombia", "Antioquia", "Medellín", 6.2442, -75.5812),
]

SUFFIX = {0: ["Republic", "Federation"], 1: ["Province", "Region", "State", "Prefecture"], 2: ["City", "District", "Centre"]}

ALTERNATES = {
    "United States": ["USA", "United States of America"],
    "South Korea": ["Republic of Korea", "Korea"],
    "Czechia": ["Czech Republic"],
    "Lombardy": ["Lombardia"],
    "Catalonia": ["Catalunya"],
    "Andalusia": ["Andalucía"],
    "Bavaria": ["Bayern"],
    "Rome": ["Roma"],
    "Milan": ["Milano"],
    "Munich": ["München"],
    "Seville": ["Sevilla"],
    "Marrakesh": ["Marrakech"],
    "Kyoto": ["Kyōto"],
    "Quebec": ["Québec"],
}


def strip_accents(s):
    return "".join(c for c in unicodedata.normalize("NFD", s) if unicodedata.category(c) != "Mn")


def typo(rng, s):
    idx = [i for i, c in enumerate(s) if c.isalpha()]
    if len(idx) < 5:
        return s + s[-1]
    i = rng.choice(idx[1:-1])
    kind = rng.randrange(3)
    if kind == 0:
        return s[:i] + s[i + 1:]
    if kind == 1:
        return s[:i] + s[i] + s[i:]
    return s[:i] + s[i + 1] + s[i] + s[i + 2:] if i + 1 < len(s) else s


def variant(rng, s, level):
    """A surface variant of the same place name."""
    # Country names come out canonical or as a known alternate.
    options = ["typo", "suffix"] if level > 0 else []
    if strip_accents(s) != s:
        options.append("accent")
    if s in ALTERNATES:
        options.append("alternate")
    if not options:
        return s
    kind = rng.choice(options)
    if kind == "typo":
        return typo(rng, s)
    if kind == "suffix":
        return s + " " + rng.choice(SUFFIX[level])
    if kind == "accent":
        return strip_accents(s)
    return rng.choice(ALTERNATES[s])


def destination(lat, lon, d_km, bearing):
    r = 6371.0
    p1, l1, b, delta = math.radians(lat), math.radians(lon), math.radians(bearing), d_km / r
    p2 = math.asin(math.sin(p1) * math.cos(delta) + math.cos(p1) * math.sin(delta) * math.cos(b))
    l2 = l1 + math.atan2(math.sin(b) * math.sin(delta) * math.cos(p1), math.cos(delta) - math.sin(p1) * math.sin(p2))
    lon2 = (math.degrees(l2) + 540.0) % 360.0 - 180.0
    return round(math.degrees(p2), 5), round(lon2, 5)


def level_name(rng, truth, level, correct_prob, exact_prob):
    """True name (exact or a variant) with correct_prob, else another place."""
    if rng.random() < correct_prob:
        return truth[level] if rng.random() < exact_prob else variant(rng, truth[level], level)
    others = [p for p in PLACES if p[level] != truth[level]]
    return rng.choice(others)[level]


def make_pair(rng, i):
    truth = rng.choice(PLACES)
    d = math.exp(rng.uniform(math.log(1.0), math.log(6000.0)))
    lat, lon = destination(truth[3], truth[4], d, rng.uniform(0.0, 360.0))
    # The chance that a level names the true place falls with d. How that
    # name is spelled does not depend on d: country names are nearly always
    # canonical, region and precise names often come in a variant form.
    pred = []
    for level, scale, p_exact in ((0, 900.0, 0.9), (1, 180.0, 0.4), (2, 30.0, 0.4)):
        p_correct = 1.0 / (1.0 + (d / scale) ** 2)
        pred.append(level_name(rng, truth, level, p_correct, p_exact))
    return {
        "id": f"s{i:04d}",
        "truth": {"lat": truth[3], "lon": truth[4], "country": truth[0], "region": truth[1], "precise": truth[2]},
        "pred": {"lat": lat, "lon": lon, "country": pred[0], "region": pred[1], "precise": pred[2]},
        "planted_km": round(d, 3),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=20260101)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    for i in range(args.n):
        print(json.dumps(make_pair(rng, i), ensure_ascii=False, sort_keys=True))


if __name__ == "__main__":
    main()
