#!/usr/bin/env python3
"""Regenerate the checked-in fixture data under fixtures/.

Everything here is deterministic; re-running must reproduce the committed
files byte for byte.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
sys.path.insert(0, str(ROOT / "src"))

SEED = 12345


# --- lexicon snapshot ---------------------------------------------------------

HYPERNYMS = {
    # physical entities and craft
    "physical_entity.n.01": "entity.n.01",
    "object.n.01": "physical_entity.n.01",
    "whole.n.02": "object.n.01",
    "artifact.n.01": "whole.n.02",
    "instrumentality.n.03": "artifact.n.01",
    "conveyance.n.03": "instrumentality.n.03",
    "vehicle.n.01": "conveyance.n.03",
    "craft.n.02": "vehicle.n.01",
    "vessel.n.02": "craft.n.02",
    "boat.n.01": "vessel.n.02",
    "barge.n.01": "boat.n.01",
    "bareboat.n.01": "vessel.n.02",
    "ship.n.01": "vessel.n.02",
    "cargo_ship.n.01": "ship.n.01",
    "spacecraft.n.01": "craft.n.02",
    "shuttle.n.01": "spacecraft.n.01",
    "starship.n.01": "spacecraft.n.01",
    "device.n.01": "instrumentality.n.03",
    "weapon.n.01": "device.n.01",
    "blaster.n.01": "weapon.n.01",
    "toy.n.01": "device.n.01",
    "probe.n.01": "device.n.01",
    # people
    "organism.n.01": "physical_entity.n.01",
    "person.n.01": "organism.n.01",
    "expert.n.01": "person.n.01",
    "engineer.n.01": "expert.n.01",
    "doctor.n.01": "expert.n.01",
    "peer.n.01": "person.n.01",
    "traveler.n.01": "person.n.01",
    "pilot.n.01": "traveler.n.01",
    # abstractions and events
    "abstraction.n.06": "entity.n.01",
    "psychological_feature.n.01": "abstraction.n.06",
    "event.n.01": "psychological_feature.n.01",
    "happening.n.01": "event.n.01",
    "ceremony.n.01": "happening.n.01",
    "party.n.01": "happening.n.01",
    "accident.n.01": "happening.n.01",
    "act.n.02": "event.n.01",
    "action.n.01": "act.n.02",
    # communication
    "communication.n.02": "abstraction.n.06",
    "auditory_communication.n.01": "communication.n.02",
    "music.n.01": "auditory_communication.n.01",
    "composition.n.01": "music.n.01",
    "song.n.01": "composition.n.01",
    "anthem.n.01": "composition.n.01",
    "document.n.01": "communication.n.02",
    "letter.n.01": "document.n.01",
    "message.n.01": "communication.n.02",
    "signal.n.01": "message.n.01",
    # possession: shaped so "bounty" generalizes to bounty.n.04
    "possession.n.02": "entity.n.01",
    "transferred_property.n.01": "possession.n.02",
    "gift.n.01": "transferred_property.n.01",
    "bounty.n.04": "gift.n.01",
    "prize.n.01": "bounty.n.04",
    "bounty.n.01": "prize.n.01",
    # locations
    "location.n.01": "object.n.01",
    "region.n.03": "location.n.01",
    "district.n.01": "region.n.03",
    "outpost.n.01": "district.n.01",
    "station.n.01": "district.n.01",
}

LEMMA_INDEX = {
    "entity|n": "entity.n.01",
    "barge|n": "barge.n.01",
    "bareboat|n": "bareboat.n.01",
    "boat|n": "boat.n.01",
    "ship|n": "ship.n.01",
    "shuttle|n": "shuttle.n.01",
    "starship|n": "starship.n.01",
    "probe|n": "probe.n.01",
    "blaster|n": "blaster.n.01",
    "weapon|n": "weapon.n.01",
    "toy|n": "toy.n.01",
    "device|n": "device.n.01",
    "engineer|n": "engineer.n.01",
    "doctor|n": "doctor.n.01",
    "pilot|n": "pilot.n.01",
    "peer|n": "peer.n.01",
    "person|n": "person.n.01",
    "ceremony|n": "ceremony.n.01",
    "party|n": "party.n.01",
    "accident|n": "accident.n.01",
    "song|n": "song.n.01",
    "anthem|n": "anthem.n.01",
    "letter|n": "letter.n.01",
    "signal|n": "signal.n.01",
    "bounty|n": "bounty.n.01",
    "outpost|n": "outpost.n.01",
    "station|n": "station.n.01",
}

VERB_CLASSES = {
    "inspect": ["assessment-34.1"],
    "assess": ["assessment-34.1"],
    "scan": ["assessment-34.1"],
    "survey": ["assessment-34.1"],
    "send": ["send-11.1"],
    "transport": ["send-11.1"],
    "deliver": ["send-11.1"],
    "chase": ["chase-51.6"],
    "pursue": ["chase-51.6"],
    "follow": ["chase-51.6"],
    "act": ["act-114-1-1"],
    "move": ["act-114-1-1"],
    "arrive": ["escape-51.1-1"],
    "escape": ["escape-51.1-1"],
    "depart": ["escape-51.1-1"],
    "discover": ["discover-84"],
    "find": ["discover-84"],
    "learn": ["discover-84"],
    "settle": ["settle-36.1.2"],
    "decide": ["settle-36.1.2"],
    "amuse": ["amuse-31.1"],
    "surprise": ["amuse-31.1"],
    "run": ["run-51.3.2"],
    "dash": ["run-51.3.2"],
    "comprehend": ["comprehend-87.2"],
    "know": ["comprehend-87.2"],
    "say": ["say-37.7"],
    "tell": ["say-37.7"],
    "report": ["say-37.7"],
    "fight": ["battle-36.4"],
    "battle": ["battle-36.4"],
    "watch": ["see-30.1"],
    "observe": ["see-30.1"],
    "greet": ["judgment-33.1"],
    "welcome": ["judgment-33.1"],
}

FRAMES = {
    "assessment-34.1": [["NP", "V", "NP"], ["NP", "V"]],
    "send-11.1": [["NP", "V", "NP", "PP"], ["NP", "V", "NP"]],
    "chase-51.6": [["NP", "V", "NP"], ["NP", "V", "NP", "PP"]],
    "act-114-1-1": [["NP", "V", "PP"], ["NP", "V"]],
    "escape-51.1-1": [["NP", "V"], ["NP", "V", "PP"]],
    "discover-84": [["NP", "V", "NP"], ["NP", "V", "NP", "PP"]],
    "settle-36.1.2": [["NP", "V"], ["NP", "V", "NP"]],
    "amuse-31.1": [["NP", "V", "NP"]],
    "run-51.3.2": [["NP", "V"], ["NP", "V", "PP"]],
    "comprehend-87.2": [["NP", "V", "NP"]],
    "say-37.7": [["NP", "V"], ["NP", "V", "NP"]],
    "battle-36.4": [["NP", "V", "NP"], ["NP", "V"]],
    "see-30.1": [["NP", "V", "NP"]],
    "judgment-33.1": [["NP", "V", "NP"]],
}

GENDER_TABLE = {
    "kira": "fem",
    "jadzia": "fem",
    "lomi": "fem",
    "odo": "masc",
    "boba": "masc",
    "worf": "masc",
    "julian": "masc",
    "yani": "unknown",
}


def write_lexicon() -> None:
    hyponyms: dict[str, list[str]] = {}
    for child, parent in HYPERNYMS.items():
        hyponyms.setdefault(parent, []).append(child)
    for v in hyponyms.values():
        v.sort()
    doc = {
        "hypernyms": HYPERNYMS,
        "hyponyms": hyponyms,
        "lemma_index": LEMMA_INDEX,
        "verb_classes": VERB_CLASSES,
        "frames": FRAMES,
        "gender_table": GENDER_TABLE,
    }
    (FIXTURES / "lexicon.json").write_text(
        json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )


# --- parsed fixture corpus ----------------------------------------------------

PERSONS = ["Kira", "Odo", "Boba Fett", "Worf", "Jadzia Dax", "Julian Bashir", "Lomi Plo"]
ORGS = ["Jabba the Hutt", "Starfleet", "the Dominion", "the Empire"]
LOCATIONS = ["Tatooine", "Bajor", "Coruscant", "Cardassia"]
VESSELS = ["Uss Lakota", "Millennium Falcon", "Defiant"]

NOUNS = [
    "barge", "ship", "shuttle", "starship", "probe", "blaster", "weapon",
    "toy", "device", "engineer", "doctor", "pilot", "peer", "ceremony",
    "party", "song", "anthem", "letter", "signal", "bounty", "outpost",
    "station",
]
TRANS_VERBS = [
    ("inspects", "inspect"), ("scans", "scan"), ("chases", "chase"),
    ("follows", "follow"), ("discovers", "discover"), ("finds", "find"),
    ("watches", "watch"), ("observes", "observe"), ("surveys", "survey"),
    ("greets", "greet"), ("knows", "know"), ("surprises", "surprise"),
]
SEND_VERBS = [("sends", "send"), ("transports", "transport"), ("delivers", "deliver")]
INTRANS_VERBS = [
    ("arrives", "arrive"), ("escapes", "escape"), ("departs", "depart"),
    ("runs", "run"), ("decides", "decide"),
]
PREPS = ["to", "through", "from"]
ADJS = ["upset", "happy", "angry", "calm"]


def _name_tokens(name: str, category: str, start: int):
    parts = name.split()
    tokens = [(p, p.lower(), "NNP") for p in parts]
    if name.startswith("the "):
        tokens[0] = ("the", "the", "DT")
    span = (start, start + len(parts), category)
    return tokens, span


def _pick_entity(rng: random.Random, story_entities):
    category, names = rng.choice(
        [("PERSON", PERSONS), ("ORG", ORGS), ("LOCATION", LOCATIONS), ("VESSEL", VESSELS)]
    )
    pool = story_entities.setdefault(category, rng.sample(names, min(2, len(names))))
    return category, rng.choice(pool)


def make_sentence(rng: random.Random, story_entities) -> dict:
    kind = rng.choices(
        ["svo", "svopp", "prp_pp", "intrans", "conj", "sbar"],
        weights=[30, 20, 15, 10, 12, 13],
    )[0]
    tokens: list[tuple[str, str, str]] = []
    deps: list[tuple[int, int, str]] = []
    ner: list[tuple[int, int, str]] = []
    cons: list[tuple[int, int, str]] = []

    def add(tok):
        tokens.append(tok)
        return len(tokens) - 1

    def add_entity():
        category, name = _pick_entity(rng, story_entities)
        toks, span = _name_tokens(name, category, len(tokens))
        for t in toks:
            tokens.append(t)
        ner.append(span)
        return span[1] - 1  # head = last token of the span

    if kind in ("svo", "svopp"):
        subj = add_entity()
        surface, lemma = rng.choice(TRANS_VERBS if kind == "svo" else SEND_VERBS)
        verb = add((surface, lemma, "VBZ"))
        det = add(("the", "the", "DT"))
        obj = add((rng.choice(NOUNS), tokens and "", "NN"))
        tokens[obj] = (tokens[obj][0], tokens[obj][0], "NN")
        deps += [(-1, verb, "root"), (verb, subj, "nsubj"), (verb, obj, "dobj"), (obj, det, "det")]
        if kind == "svopp":
            prep = add((rng.choice(PREPS), tokens[-1][0], "IN"))
            tokens[prep] = (tokens[prep][0], tokens[prep][0], "IN")
            det2 = add(("the", "the", "DT"))
            pobj = add((rng.choice(NOUNS), "", "NN"))
            tokens[pobj] = (tokens[pobj][0], tokens[pobj][0], "NN")
            deps += [(verb, prep, "prep"), (prep, pobj, "pobj"), (pobj, det2, "det")]
        add((".", ".", "."))
    elif kind == "prp_pp":
        subj = add(("She" if rng.random() < 0.5 else "He", "she", "PRP"))
        surface, lemma = rng.choice([("moves", "move"), ("runs", "run"), ("acts", "act")])
        verb = add((surface, lemma, "VBZ"))
        prep = add((rng.choice(PREPS), "", "IN"))
        tokens[prep] = (tokens[prep][0], tokens[prep][0], "IN")
        det = add(("the", "the", "DT"))
        pobj = add((rng.choice(NOUNS), "", "NN"))
        tokens[pobj] = (tokens[pobj][0], tokens[pobj][0], "NN")
        deps += [(-1, verb, "root"), (verb, subj, "nsubj"), (verb, prep, "prep"),
                 (prep, pobj, "pobj"), (pobj, det, "det")]
        add((".", ".", "."))
    elif kind == "intrans":
        subj = add_entity()
        surface, lemma = rng.choice(INTRANS_VERBS)
        verb = add((surface, lemma, "VBZ"))
        deps += [(-1, verb, "root"), (verb, subj, "nsubj")]
        add((".", ".", "."))
    elif kind == "conj":
        subj1 = add_entity()
        s1, l1 = rng.choice(INTRANS_VERBS)
        verb1 = add((s1, l1, "VBZ"))
        cc = add(("and", "and", "CC"))
        subj2 = add_entity()
        s2, l2 = rng.choice(INTRANS_VERBS)
        verb2 = add((s2, l2, "VBZ"))
        deps += [(-1, verb1, "root"), (verb1, subj1, "nsubj"),
                 (verb1, cc, "cc"), (verb1, verb2, "conj"), (verb2, subj2, "nsubj")]
        cons += [(0, cc, "S"), (cc + 1, len(tokens), "S")]
        add((".", ".", "."))
    else:  # sbar
        subj = add_entity()
        verb = add(("says", "say", "VBZ"))
        start_sbar = len(tokens)
        that = add(("that", "that", "IN"))
        inner_subj = add(("she" if rng.random() < 0.5 else "he", "she", "PRP"))
        inner_verb = add(("is", "be", "VBZ"))
        adj = add((rng.choice(ADJS), "", "JJ"))
        tokens[adj] = (tokens[adj][0], tokens[adj][0], "JJ")
        deps += [(-1, verb, "root"), (verb, subj, "nsubj"), (verb, inner_verb, "ccomp"),
                 (inner_verb, that, "mark"), (inner_verb, inner_subj, "nsubj"),
                 (inner_verb, adj, "acomp")]
        end = add((".", ".", "."))
        cons += [(0, end, "S"), (start_sbar, end, "SBAR")]

    return {
        "tokens": [list(t) for t in tokens],
        "dep_edges": [list(e) for e in deps],
        "ner_spans": [list(s) for s in ner],
        "constituency": [list(c) for c in cons],
    }


def write_corpus(n_stories: int = 60) -> None:
    rng = random.Random(SEED)
    with open(FIXTURES / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for sid in range(n_stories):
            story_entities: dict = {}
            sentences = [
                make_sentence(rng, story_entities)
                for _ in range(rng.randint(4, 7))
            ]
            rec = {
                "id": f"story-{sid:03d}",
                "title": f"Episode {sid}",
                "source": "fixture",
                "sentences": sentences,
            }
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def write_pools() -> None:
    pool = {
        "PERSON": PERSONS + ["O Yani", "Mrs Conners", "Dark Jedi Lomi Plo"],
        "ORG": ORGS,
        "LOCATION": LOCATIONS,
        "VESSEL": VESSELS,
        "NUMBER": ["two", "seven", "forty-seven"],
    }
    (FIXTURES / "entity_pool.json").write_text(
        json.dumps(pool, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    rows = ["name,gender,count"]
    census = [
        ("kira", "fem", 95), ("kira", "masc", 5), ("odo", "masc", 100),
        ("boba", "masc", 90), ("boba", "fem", 10), ("worf", "masc", 99),
        ("jadzia", "fem", 100), ("julian", "masc", 88), ("julian", "fem", 12),
        ("lomi", "fem", 85), ("lomi", "masc", 15), ("yani", "fem", 55),
        ("yani", "masc", 45),
    ]
    rows += [f"{n},{g},{c}" for n, g, c in census]
    (FIXTURES / "gender.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")


def write_frame_map() -> None:
    from eventsent.templater import DEFAULT_FRAME_MAP

    (FIXTURES / "frame_map.json").write_text(
        json.dumps(DEFAULT_FRAME_MAP, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )


def write_grid() -> None:
    grid = {
        "retedit": [0.3, 0.6, 0.9],
        "templates": [0.3, 0.6, 0.9],
        "mc_beam": [0.3, 0.6, 0.9],
    }
    (FIXTURES / "grid.json").write_text(
        json.dumps(grid, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )


def write_events_sample(n: int = 50) -> None:
    """50 events from the eventified test+validation stories, as the
    pipeline's stand-in for an upstream event generator."""
    from eventsent.eventify import eventify_corpus, story_from_dict
    from eventsent.jsonl import read_jsonl, write_jsonl, make_header
    from eventsent.lexicon import load_lexicon

    lexicon = load_lexicon(FIXTURES / "lexicon.json")
    _, raw = read_jsonl(FIXTURES / "corpus.jsonl")
    stories = [story_from_dict(r) for r in raw]
    per_story, split = eventify_corpus(stories, lexicon, seed=0)
    events = [
        {"event": event.to_list()}
        for story in split.test + split.validation
        for event, _ in per_story[story.id]
    ][:n]
    write_jsonl(
        FIXTURES / "events_sample.jsonl",
        events,
        make_header("make_fixtures", {"seed": SEED, "n": n}, seed=SEED),
    )


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    write_lexicon()
    write_corpus()
    write_pools()
    write_frame_map()
    write_grid()
    write_events_sample()
    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()
