#!/usr/bin/env python3
# Copyright 2026 The PIS Simulator Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the synthetic fixtures under data/fixtures.

Output is deterministic; rerunning must not change committed files.
"""

import argparse
import pathlib
import random

HOUR = 3600


def write_trace(path, num_nodes, duration, contacts):
    """contacts: list of (start, end, a, b) with a < b, non-overlapping per pair."""
    events = []
    for start, end, a, b in contacts:
        events.append((start, 1, a, b, "up"))
        events.append((end, 0, a, b, "down"))
    events.sort()
    with open(path, "w") as f:
        f.write(f"# nodes={num_nodes} duration={duration}\n")
        for t, _, a, b, kind in events:
            f.write(f"{t} {a} {b} {kind}\n")


def write_profiles(path, profiles):
    with open(path, "w") as f:
        f.write("# node | interests | friends\n")
        for node, (interests, friends) in enumerate(profiles):
            f.write(f"{node} | {','.join(interests)} | {','.join(str(x) for x in friends)}\n")


def hourly_contacts(rng, num_nodes, hours, prob):
    """At most one contact per pair per hour, inside the hour."""
    contacts = []
    for h in range(hours):
        for a in range(num_nodes):
            for b in range(a + 1, num_nodes):
                p = prob(h, a, b)
                if p > 0 and rng.random() < p:
                    start = h * HOUR + rng.randrange(0, 3000)
                    length = rng.randrange(60, 600)
                    contacts.append((start, start + length, a, b))
    return contacts


def small10(out, rng):
    """Two groups of five; nodes 4 and 5 bridge them."""
    group = lambda n: 0 if n < 5 else 1

    def prob(h, a, b):
        if group(a) == group(b):
            return 0.25
        if {a, b} == {4, 5}:
            return 0.5
        return 0.02

    contacts = hourly_contacts(rng, 10, 40, prob)
    write_trace(out / "small10.trace", 10, 40 * HOUR, contacts)
    topics = [["music", "sports"], ["books", "travel"]]
    profiles = []
    for n in range(10):
        g = group(n)
        friends = [m for m in range(10) if m != n and group(m) == g and (m + n) % 2 == 1]
        if n in (4, 5):
            friends.append(9 - n)
        profiles.append((topics[g] + (["film"] if n in (4, 5) else []), sorted(friends)))
    write_profiles(out / "small10.profiles", profiles)


def community20(out, rng):
    """Four communities of five with daily routines.

    Members meet often inside their community. Each community has one
    member who visits the next community during a fixed two-hour window of
    the day, so cross-community paths recur at the same time of day.
    """
    community = lambda n: n // 5
    travellers = {c: 5 * c + 4 for c in range(4)}

    def prob(h, a, b):
        ca, cb = community(a), community(b)
        hour_of_day = h % 24
        if ca == cb:
            # Quiet at night.
            return 0.05 if hour_of_day < 7 else 0.35
        for c, t in travellers.items():
            host = (c + 1) % 4
            window = 8 + 3 * c
            if t in (a, b) and {ca, cb} == {c, host} and window <= hour_of_day < window + 2:
                return 0.6
        return 0.004

    contacts = hourly_contacts(rng, 20, 40, prob)
    write_trace(out / "community20.trace", 20, 40 * HOUR, contacts)
    topics = [["music", "film"], ["sports", "travel"], ["books", "science"], ["food", "games"]]
    profiles = []
    for n in range(20):
        c = community(n)
        friends = [m for m in range(20) if m != n and community(m) == c]
        interests = list(topics[c])
        if n == travellers[c]:
            interests.append(topics[(c + 1) % 4][0])
            friends.append(travellers[(c + 1) % 4])
            friends.append(travellers[(c + 3) % 4])
        profiles.append((interests, sorted(set(friends))))
    write_profiles(out / "community20.profiles", profiles)


def raw_samples(out, rng):
    """Small raw traces in the two supported dataset layouts."""
    # Bluetooth scan log: one row per sighting, 1-based ids, 120 s scans.
    rows = []
    for scan in range(60):
        t = 1_246_000_000 + scan * 120
        for a in range(1, 11):
            for b in range(1, 11):
                if a != b and rng.random() < (0.5 if (a + b) % 3 == 0 else 0.08):
                    rows.append((t, a, b))
    with open(out / "sigcomm09_sample.csv", "w") as f:
        f.write("timestamp;user_id;seen_user_id\n")
        for t, a, b in rows:
            f.write(f"{t};{a};{b}\n")

    # Contact records: id1 id2 start end seq gap, sorted by start.
    records = []
    for a in range(1, 11):
        for b in range(a + 1, 11):
            t = rng.randrange(0, 600)
            seq = 1
            while t < 20_000:
                length = rng.randrange(0, 900)
                gap = rng.randrange(120, 4000)
                records.append((t, a, b, t + length, seq, gap))
                t += length + gap
                seq += 1
    records.sort()
    with open(out / "infocom06_sample.dat", "w") as f:
        for start, a, b, end, seq, gap in records:
            f.write(f"{a} {b} {start} {end} {seq} {gap}\n")

    langs = ["en", "fr", "en", "de", "fr", "en", "de", "es", "fr", "en"]
    with open(out / "infocom06_sample.profiles", "w") as f:
        f.write("# node | interests | friends (lang:<tag> joins a language group)\n")
        for n in range(10):
            interests = ["networking", "security"] if n % 2 == 0 else ["networking", "hci"]
            friends = [f"lang:{langs[n]}"]
            if n == 0:
                friends.append("3")
            f.write(f"{n} | {','.join(interests)} | {','.join(friends)}\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=pathlib.Path,
                        default=pathlib.Path(__file__).resolve().parent.parent / "data" / "fixtures")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    small10(args.out, random.Random(10))
    community20(args.out, random.Random(20))
    raw_samples(args.out, random.Random(6))


if __name__ == "__main__":
    main()
