#!/usr/bin/env python3
"""Generate the synthetic opposing-polarity phrase fixture under data/.

The fixture mimics a real phrase sentiment lexicon: unigram entries carry
sentiment scores in [-1, 1], and every bigram/trigram phrase pairs tokens of
opposing polarity.  Pattern inventory, gold-label splits, and most-polar
agreement counts are pinned by the quota tables below, chosen so that the
deterministic rule baselines, the mined pattern table, and the entry counts
all land on fixed, hand-verified targets.  On top of that skeleton the
generator layers the signal the learners feed on:

  * token score bands  -- each polar token's magnitude sits in one of four
    disjoint bands; inside a phrase the most polar token lands in a high
    band and the rest in a low band ("wide" phrases) or all tokens sit in
    the two middle bands ("narrow" phrases).  Wide phrases mostly agree
    with the most-polar rule, narrow ones mostly disagree, so constituent
    scores carry phrase-level signal that sentiment labels alone miss.
  * token preferences  -- every token leans positive or negative (a stable
    hash bit); most occurrences land in phrases whose gold polarity matches
    the leaning, so token identity is informative too.  The match rate is
    high for wide phrases and much lower for narrow ones, keeping scores
    irreplaceable on the slice where identity goes quiet.

Run from the repository root:

    python3 scripts/build_dataset.py

Writes data/scl_opp.tsv and data/scl_opp_pos.tsv, then re-loads both through
the package and asserts every frozen target before leaving files in place.
"""

from __future__ import annotations

import hashlib
import sys
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from sentcomp import patterns  # noqa: E402
from sentcomp.baselines import RuleBaseline  # noqa: E402
from sentcomp.lexicon import load_pos_file, load_scl, phrase_records  # noqa: E402

MASTER_SEED = 612377
DATA_DIR = ROOT / "data"

# Quota rows: slot pattern, phrase count, negative-gold count, and how many
# phrases agree with the most-polar constituent.  Signed slots are
# "+pos"/"-pos"; a bare "det" slot is a low-magnitude function word.
BIGRAM_QUOTAS = [
    ("-adj +adj", 17, 4, 11),
    ("-adj +noun", 68, 40, 45),
    ("+adj -noun", 73, 39, 48),
    ("+adv -adj", 18, 16, 12),
    ("+adv -verb", 11, 10, 7),
    ("-noun +noun", 10, 4, 8),
    ("+noun -noun", 25, 13, 19),
    ("-verb +noun", 17, 14, 11),
    ("+adj -adj", 9, 7, 6),
    ("-noun +adj", 9, 3, 6),
    ("+verb -noun", 9, 4, 6),
    ("-adv +verb", 9, 2, 6),
    ("+noun -verb", 9, 7, 6),
    ("-verb +adj", 9, 2, 6),
    ("+verb -adj", 9, 7, 6),
    ("-adj +verb", 9, 4, 5),
]
TRIGRAM_QUOTAS = [
    ("-verb det +noun", 17, 11, 12),
    ("+adv -adj +noun", 9, 7, 7),
    ("-adv +adj -noun", 9, 6, 7),
    ("+adj -noun +noun", 9, 2, 6),
    ("-adj +noun -noun", 9, 9, 7),
    ("+adj +noun -noun", 9, 6, 6),
    ("-adj -noun +noun", 9, 7, 6),
    ("det +adj -noun", 9, 6, 7),
    ("det -adj +noun", 9, 6, 6),
    ("+verb det -adj", 9, 8, 7),
    ("-verb det +adj", 9, 2, 6),
    ("+noun -adj +noun", 9, 6, 6),
    ("-noun +adj +noun", 9, 3, 6),
    ("+adv +adj -noun", 9, 6, 7),
    ("-adv -adj +noun", 9, 6, 6),
    ("+adj -verb +noun", 9, 2, 6),
    ("+verb -noun +noun", 9, 2, 6),
    ("-verb +noun -noun", 9, 8, 7),
    ("+noun -verb +noun", 9, 6, 6),
    ("-noun +verb -noun", 9, 5, 6),
    ("+adv -verb +noun", 9, 5, 6),
    ("-adv +verb -noun", 9, 5, 6),
    ("+verb det -noun", 9, 4, 6),
    ("-noun -verb +noun", 9, 4, 6),
    ("+noun +verb -noun", 9, 4, 6),
    ("+noun -noun +noun", 9, 4, 7),
    ("-noun +noun -noun", 9, 9, 6),
    ("+noun det -noun", 9, 9, 6),
    ("-noun det +noun", 5, 3, 3),
]

# Frozen document-level targets implied by the quota tables (recounted by
# hand; the script re-derives them from the package after generation).
TARGETS = {
    2: {"support": 311, "majority": 176, "last": 178, "most_polar": 208, "pos_rule": 204},
    3: {"support": 265, "majority": 161, "last": 157, "most_polar": 185, "pos_rule": 169},
}
UNIGRAM_TARGET = 602

# Score bands (absolute magnitude).  "Wide" phrases put their most polar
# token in VERY_STRONG and everything else in MILD; "narrow" phrases use
# STRONG for the extreme and MODERATE for the rest.  Determiners sit below
# every band so a small neutrality threshold strips them from patterns.
BANDS = {
    "very_strong": (0.78, 0.95),
    "strong": (0.52, 0.62),
    "moderate": (0.34, 0.44),
    "mild": (0.10, 0.24),
}
WIDE_RATE_AGREEING = 0.78    # P(wide | phrase agrees with most-polar rule)
WIDE_RATE_OPPOSING = 0.25    # P(wide | phrase contradicts it)
# P(token leaning matches phrase gold polarity), by band layout.  Narrow
# phrases lean far less, so token identity alone misreads many of them and
# constituent scores stay necessary for the hardest slice.
PREFERENCE_RATE = {True: 0.85, False: 0.55}

DETERMINERS = [("the", 0.01), ("a", -0.01), ("an", 0.02),
               ("this", -0.02), ("that", 0.03), ("these", -0.03)]

POSITIVE_ADJ = """
good great excellent wonderful happy joyful lovely brilliant amazing awesome
fantastic superb delightful charming graceful elegant generous kind gentle warm
friendly cheerful bright radiant glorious splendid magnificent marvelous
terrific outstanding remarkable impressive stunning beautiful gorgeous handsome
pretty sweet pleasant agreeable satisfying rewarding refreshing exciting
thrilling inspiring uplifting heartwarming comforting soothing calm peaceful
serene blissful content grateful thankful hopeful optimistic confident bold
brave courageous heroic noble honest loyal faithful sincere trustworthy
reliable capable skilled talented gifted clever smart wise insightful creative
innovative vibrant lively energetic dynamic robust healthy strong fit fresh
clean pure pristine spotless flawless perfect ideal supreme stellar golden
shiny precious valuable worthy deserving victorious triumphant successful
prosperous thriving flourishing blessed lucky fortunate merry jolly playful
funny hilarious witty charismatic adorable cute cozy snug luxurious plush
grand majestic regal
""".split()

NEGATIVE_ADJ = """
bad terrible horrible awful dreadful nasty ugly disgusting gross foul rotten
filthy dirty grim bleak dismal gloomy miserable sad unhappy depressing tragic
painful hurtful cruel brutal vicious savage violent hostile angry furious
bitter resentful jealous envious greedy selfish arrogant rude obnoxious
annoying irritating frustrating tedious boring dull lifeless stale weak feeble
frail sick ill diseased toxic poisonous deadly dangerous risky hazardous scary
frightening terrifying horrifying creepy sinister evil wicked corrupt dishonest
deceitful treacherous sneaky shady crooked unfair unjust wrong false fake
phony cheap shoddy flimsy broken faulty defective useless worthless pointless
hopeless helpless pathetic pitiful shameful disgraceful embarrassing
humiliating insulting offensive vulgar crude harsh severe grueling exhausting
draining stressful chaotic messy sloppy careless reckless foolish stupid dumb
ignorant clueless
""".split()

POSITIVE_NOUN = """
love joy happiness delight pleasure bliss paradise heaven treasure gift
blessing miracle wonder marvel beauty grace charm elegance splendor glory
triumph victory success achievement accomplishment prosperity fortune wealth
abundance bounty harvest feast celebration party festival holiday vacation
adventure journey discovery breakthrough innovation progress improvement
growth healing recovery cure remedy comfort relief ease peace harmony unity
friendship fellowship companionship loyalty devotion affection tenderness
warmth kindness generosity charity compassion mercy forgiveness hope optimism
confidence courage bravery valor honor dignity integrity honesty truth wisdom
insight knowledge learning education enlightenment inspiration creativity
imagination talent genius mastery skill expertise strength vitality energy
vigor health fitness freshness purity clarity brilliance radiance sunshine
sunrise rainbow springtime blossom bloom flower garden meadow oasis sanctuary
refuge haven home family reunion wedding anniversary birthday smile laughter
humor melody music song symphony choir angel hero champion winner star legend
idol darling sweetheart friend ally partner mentor guardian savior benefactor
patron supporter fan admirer applause praise compliment reward prize trophy
medal crown jewel gem pearl diamond gold silk velvet luxury serenity
tranquility calmness contentment gratitude jubilation ecstasy euphoria zest
zeal enthusiasm passion motivation ambition aspiration dream vision purpose
meaning fulfillment satisfaction enjoyment amusement entertainment recreation
leisure rest relaxation refreshment nourishment delicacy dessert candy
chocolate honey aroma fragrance perfume bouquet hug kiss embrace
""".split()

NEGATIVE_NOUN = """
hate hatred anger rage fury wrath hostility violence war battle conflict
fight quarrel feud dispute crisis disaster catastrophe calamity tragedy
misfortune adversity hardship struggle suffering misery agony pain ache
torment torture anguish distress despair hopelessness depression sorrow grief
mourning loss defeat failure collapse breakdown ruin destruction devastation
wreckage damage harm injury wound scar bruise infection disease illness
sickness plague epidemic virus poison venom toxin pollution contamination
filth garbage trash junk debris rubble mess chaos disorder confusion turmoil
mayhem havoc panic terror fear fright dread horror nightmare monster demon
devil villain criminal thief burglar robber murderer killer predator bully
tyrant dictator oppressor enemy foe rival traitor betrayal treachery deceit
deception fraud scam hoax lie falsehood slander insult mockery ridicule scorn
contempt disdain disgust revulsion shame disgrace dishonor humiliation
scandal corruption greed envy jealousy spite malice cruelty brutality
savagery abuse neglect abandonment isolation loneliness emptiness void curse
jinx burden obstacle barrier setback drawback flaw defect error mistake
blunder accident mishap
""".split()

POSITIVE_VERB = """
adore cherish admire applaud commend congratulate thank appreciate enjoy
relish savor flourish thrive succeed win prevail excel shine sparkle glow
brighten uplift inspire encourage empower strengthen heal soothe console
rescue save protect nurture nourish help assist benefit enrich improve
enhance rejoice grin laugh celebrate dazzle captivate impress reassure
invigorate please gratify
""".split()

NEGATIVE_VERB = """
despise loathe detest abhor resent begrudge mock taunt offend humiliate
embarrass demean degrade belittle criticize condemn denounce blame accuse
attack assault hurt injure maim wreck destroy demolish shatter smash crush
betray deceive cheat mislead steal rob kill murder slaughter harass
intimidate threaten terrify frighten scare horrify disturb annoy irritate
aggravate infuriate enrage provoke sabotage undermine weaken pollute litter
rot decay wither fail lose suffer throb
""".split()

POSITIVE_ADV = """
happily joyfully gladly cheerfully merrily beautifully gracefully elegantly
superbly brilliantly wonderfully marvelously splendidly perfectly flawlessly
smoothly gently kindly warmly politely bravely boldly proudly honestly
sincerely faithfully generously wisely cleverly skillfully
""".split()

NEGATIVE_ADV = """
badly terribly horribly awfully dreadfully poorly miserably painfully
bitterly angrily rudely harshly cruelly viciously recklessly carelessly
foolishly blindly
""".split()

WORD_LISTS = {
    ("+", "adj"): POSITIVE_ADJ, ("-", "adj"): NEGATIVE_ADJ,
    ("+", "noun"): POSITIVE_NOUN, ("-", "noun"): NEGATIVE_NOUN,
    ("+", "verb"): POSITIVE_VERB, ("-", "verb"): NEGATIVE_VERB,
    ("+", "adv"): POSITIVE_ADV, ("-", "adv"): NEGATIVE_ADV,
}

FINE_TAGS = {"adj": ("JJ",), "adv": ("RB",), "det": ("DT",),
             "noun": ("NN", "NNS"), "verb": ("VB", "VBD", "VBG", "VBZ")}


def stable_digest(token: str) -> bytes:
    return hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()


def leaning(token: str) -> str:
    """Stable positive/negative leaning bit used for token placement."""
    return "+" if stable_digest(token)[0] % 2 == 0 else "-"


def fine_tag(token: str, coarse: str) -> str:
    choices = FINE_TAGS[coarse]
    return choices[stable_digest(token)[1] % len(choices)]


def parse_slots(text: str) -> tuple[tuple[str | None, str], ...]:
    out = []
    for part in text.split():
        if part == "det":
            out.append((None, "det"))
        else:
            out.append((part[0], part[1:]))
    return tuple(out)


@dataclass
class PhraseSpec:
    pattern_id: int
    n: int
    slots: tuple[tuple[str | None, str], ...]
    gold: str                      # phrase polarity sign "+" / "-"
    extreme_index: int             # slot holding the most polar token
    wide: bool                     # wide band gap vs narrow
    tokens: list[str] = field(default_factory=list)
    score: float = 0.0


def split_rounding(total: int, weight: float) -> int:
    return int(round(total * weight))


def joint_counts(support: int, n_neg: int, n_agree: int) -> dict[tuple[str, bool], int]:
    """Split the (gold, agrees-with-most-polar) joint to match both margins."""
    lo = max(0, n_neg + n_agree - support)
    hi = min(n_neg, n_agree)
    neg_agree = min(hi, max(lo, int(round(n_neg * n_agree / support))))
    return {
        ("-", True): neg_agree,
        ("+", True): n_agree - neg_agree,
        ("-", False): n_neg - neg_agree,
        ("+", False): (support - n_neg) - (n_agree - neg_agree),
    }


def layout_phrases(rng: np.random.Generator) -> list[PhraseSpec]:
    """PASS 1: decide every phrase's gold label, extreme slot, and bands."""
    specs: list[PhraseSpec] = []
    pattern_id = 0
    for n, quotas in ((2, BIGRAM_QUOTAS), (3, TRIGRAM_QUOTAS)):
        for slot_text, support, n_neg, n_agree in quotas:
            slots = parse_slots(slot_text)
            cells = joint_counts(support, n_neg, n_agree)
            extreme_cycle = {"+": 0, "-": 0}
            group: list[PhraseSpec] = []
            for (gold, agrees), count in cells.items():
                extreme_sign = gold if agrees else ("-" if gold == "+" else "+")
                candidates = [i for i, (sig, _) in enumerate(slots) if sig == extreme_sign]
                if not candidates:
                    raise AssertionError(f"no {extreme_sign} slot in {slot_text}")
                wide_n = split_rounding(
                    count, WIDE_RATE_AGREEING if agrees else WIDE_RATE_OPPOSING)
                wide_flags = [i < wide_n for i in range(count)]
                rng.shuffle(wide_flags)
                for flag in wide_flags:
                    idx = candidates[extreme_cycle[extreme_sign] % len(candidates)]
                    extreme_cycle[extreme_sign] += 1
                    group.append(PhraseSpec(pattern_id, n, slots, gold, idx, flag))
            rng.shuffle(group)
            specs.extend(group)
            pattern_id += 1
    return specs


def band_of(spec: PhraseSpec, slot_index: int) -> str:
    if slot_index == spec.extreme_index:
        return "very_strong" if spec.wide else "strong"
    return "mild" if spec.wide else "moderate"


@dataclass
class TokenPool:
    """Tokens of one (sign, POS, band, leaning) cell with a rotation cursor."""

    tokens: list[str]
    cursor: int = 0

    def draw(self, banned: set[str]) -> str | None:
        for _ in range(len(self.tokens)):
            token = self.tokens[self.cursor % len(self.tokens)]
            self.cursor += 1
            if token not in banned:
                return token
        return None


def size_pools(specs: list[PhraseSpec], rng: np.random.Generator):
    """PASS 2: pick each phrase slot's pool key, then size pools to demand.

    Returns (per-slot pool keys aligned with specs, pool sizes, demands).
    A pool key is (sign, pos, band, leaning).
    """
    slot_keys: list[list[tuple | None]] = []
    demand: Counter = Counter()
    for spec in specs:
        keys: list[tuple | None] = []
        for i, (sign, pos) in enumerate(spec.slots):
            if sign is None:
                keys.append(None)
                continue
            lean = spec.gold if rng.random() < PREFERENCE_RATE[spec.wide] else (
                "-" if spec.gold == "+" else "+")
            key = (sign, pos, band_of(spec, i), lean)
            demand[key] += 1
            keys.append(key)
        slot_keys.append(keys)

    class_demand: Counter = Counter()
    for (sign, pos, _, _), count in demand.items():
        class_demand[(sign, pos)] += count
    total_occurrences = sum(class_demand.values())
    budget_total = UNIGRAM_TARGET - len(DETERMINERS)

    # Largest-remainder split of the unigram budget across token classes.
    shares = {cls: budget_total * cnt / total_occurrences
              for cls, cnt in class_demand.items()}
    budgets = {cls: int(share) for cls, share in shares.items()}
    leftovers = sorted(shares, key=lambda c: shares[c] - budgets[c], reverse=True)
    for cls in leftovers[: budget_total - sum(budgets.values())]:
        budgets[cls] += 1
    assert sum(budgets.values()) == budget_total

    sizes: dict[tuple, int] = {}
    for cls, budget in budgets.items():
        assert len(WORD_LISTS[cls]) >= budget, (cls, budget, len(WORD_LISTS[cls]))
        cell_keys = [k for k in demand if (k[0], k[1]) == cls]
        cls_total = class_demand[cls]
        raw = {k: budget * demand[k] / cls_total for k in cell_keys}
        cell = {k: max(1, int(raw[k])) for k in cell_keys}
        while sum(cell.values()) > budget:  # the max(1,..) floor may overshoot
            k = max(cell_keys, key=lambda k: (cell[k] - raw[k], cell[k]))
            assert cell[k] > 1
            cell[k] -= 1
        order = sorted(cell_keys, key=lambda k: raw[k] - cell[k], reverse=True)
        i = 0
        while sum(cell.values()) < budget:
            k = order[i % len(order)]
            if cell[k] < demand[k]:
                cell[k] += 1
            i += 1
        for k in cell_keys:
            assert 1 <= cell[k] <= demand[k], (k, cell[k], demand[k])
        sizes.update(cell)
    return slot_keys, sizes, demand


def build_pools(sizes: dict[tuple, int], rng: np.random.Generator):
    """Slice word lists into per-cell pools and assign banded scores."""
    pools: dict[tuple, TokenPool] = {}
    scores: dict[str, float] = {}
    for cls, words in WORD_LISTS.items():
        cell_keys = sorted(k for k in sizes if (k[0], k[1]) == cls)
        want = {k: sizes[k] for k in cell_keys}
        chosen: dict[tuple, list[str]] = {k: [] for k in cell_keys}
        # Tokens whose hash bit matches the cell's leaning are preferred so
        # the leaning stays a pure function of the token string.
        remaining = {k: want[k] for k in cell_keys}
        unused = []
        for word in words:
            if sum(remaining.values()) == 0:
                break
            lean = leaning(word)
            fits = [k for k in cell_keys if k[3] == lean and remaining[k] > 0]
            if not fits:
                unused.append(word)
                continue
            k = max(fits, key=lambda k: remaining[k] / max(1, want[k]))
            chosen[k].append(word)
            remaining[k] -= 1
        # Small classes may run out of one leaning; spill the leftover
        # demand onto opposite-leaning words (dilutes the identity signal
        # for a handful of tokens, nothing more).
        for k in cell_keys:
            while remaining[k] > 0:
                assert unused, (cls, k, remaining)
                chosen[k].append(unused.pop(0))
                remaining[k] -= 1
        for k in cell_keys:
            lo, hi = BANDS[k[2]]
            m = len(chosen[k])
            for i, token in enumerate(chosen[k]):
                frac = 0.5 if m == 1 else i / (m - 1)
                magnitude = round(lo + (hi - lo) * frac, 2)
                scores[token] = magnitude if k[0] == "+" else -magnitude
            pool_tokens = list(chosen[k])
            rng.shuffle(pool_tokens)
            pools[k] = TokenPool(pool_tokens)
    return pools, scores


def allocate_tokens(specs, slot_keys, pools, rng: np.random.Generator) -> None:
    """PASS 3: fill every slot, keeping phrases unique within a pattern."""
    det_cycle = 0
    seen: set[tuple[int, tuple[str, ...]]] = set()
    for spec, keys in zip(specs, slot_keys):
        for attempt in range(64):
            tokens: list[str] = []
            banned: set[str] = set()
            ok = True
            for key in keys:
                if key is None:
                    token = DETERMINERS[(det_cycle + attempt) % len(DETERMINERS)][0]
                    det_cycle += 1
                else:
                    token = pools[key].draw(banned)
                    if token is None:  # cell exhausted by the ban: flip leaning
                        alt = (key[0], key[1], key[2],
                               "-" if key[3] == "+" else "+")
                        token = pools[alt].draw(banned) if alt in pools else None
                    if token is None:
                        ok = False
                        break
                tokens.append(token)
                banned.add(token)
            if ok and (spec.pattern_id, tuple(tokens)) not in seen:
                seen.add((spec.pattern_id, tuple(tokens)))
                spec.tokens = tokens
                break
        else:
            raise AssertionError(f"could not fill pattern {spec.slots}")
        magnitude = 0.15 + 0.55 * rng.random() + 0.25 * rng.random()
        magnitude = min(0.95, max(0.10, magnitude))
        spec.score = round(magnitude if spec.gold == "+" else -magnitude, 3)
        if spec.score == 0.0:
            spec.score = 0.05 if spec.gold == "+" else -0.05


def repair_unused(specs, pools, scores) -> None:
    """Swap never-used tokens into phrases so every unigram occurs somewhere."""
    usage = Counter()
    for spec in specs:
        usage.update(spec.tokens)
    key_of = {}
    for key, pool in pools.items():
        for token in pool.tokens:
            key_of[token] = key
    unused = [t for t in key_of if usage[t] == 0]
    for token in unused:
        key = key_of[token]
        for spec in specs:
            done = False
            for i, (sign, pos) in enumerate(spec.slots):
                if sign != key[0] or pos != key[1]:
                    continue
                current = spec.tokens[i]
                if usage[current] < 2 or token in spec.tokens:
                    continue
                if key_of[current][:3] != key[:3]:  # keep sign/POS/band intact
                    continue
                usage[current] -= 1
                usage[token] += 1
                spec.tokens[i] = token
                done = True
                break
            if done:
                break
        else:
            raise AssertionError(f"token {token!r} could not be placed")


def write_files(specs, scores) -> None:
    DATA_DIR.mkdir(exist_ok=True)
    lex_rows = [(token, f"{value:.2f}") for token, value in scores.items()]
    lex_rows += [(token, f"{value:.2f}") for token, value in DETERMINERS]
    for spec in specs:
        lex_rows.append((" ".join(spec.tokens), f"{spec.score:.3f}"))
    lex_rows.sort(key=lambda row: (len(row[0].split()), row[0]))
    with open(DATA_DIR / "scl_opp.tsv", "w", encoding="utf-8") as fh:
        for term, value in lex_rows:
            fh.write(f"{term}\t{value}\n")

    pos_rows = []
    for spec in specs:
        tags = " ".join(fine_tag(tok, pos) for tok, (_, pos) in zip(spec.tokens, spec.slots))
        pos_rows.append((" ".join(spec.tokens), tags))
    pos_rows.sort(key=lambda row: (len(row[0].split()), row[0]))
    with open(DATA_DIR / "scl_opp_pos.tsv", "w", encoding="utf-8") as fh:
        for term, tags in pos_rows:
            fh.write(f"{term}\t{tags}\n")


EXPECTED_PATTERNS = [
    ("neg adj + pos adj", "positive", "0.76", 17),
    ("neg adj + pos noun", "negative", "0.59", 68),
    ("neg noun + pos noun", "positive", "0.60", 10),
    ("neg verb + det + pos noun", "negative", "0.65", 17),
    ("neg verb + pos noun", "negative", "0.82", 17),
    ("pos adj + neg noun", "negative", "0.53", 73),
    ("pos adv + neg adj", "negative", "0.89", 18),
    ("pos adv + neg verb", "negative", "0.91", 11),
    ("pos noun + neg noun", "negative", "0.52", 25),
]


def verify() -> None:
    """Reload through the package and assert every frozen target."""
    lexicon = load_scl(DATA_DIR / "scl_opp.tsv")
    counts = lexicon.counts_by_length()
    assert counts == {1: 602, 2: 311, 3: 265}, counts
    pos_table = load_pos_file(DATA_DIR / "scl_opp_pos.tsv")

    for n in (2, 3):
        records = phrase_records(lexicon, pos_table, n=n)
        target = TARGETS[n]
        assert len(records) == target["support"]
        gold = np.array([r.label for r in records])
        n_neg = int(np.sum(gold < 0))
        assert n_neg == target["majority"], (n, n_neg)
        for kind, name in (("last-unigram", "last"), ("most-polar", "most_polar"),
                           ("pos-rule", "pos_rule")):
            rule = RuleBaseline(kind).fit(records)
            preds = np.where(rule.predict(records) >= 0, 1, -1)
            correct = int(np.sum(preds == gold))
            assert correct == target[name], (n, kind, correct, target[name])

    both = phrase_records(lexicon, pos_table, n=2) + phrase_records(
        lexicon, pos_table, n=3)
    mined = patterns.mine(both, min_support=10, min_rate=0.5, neutral_threshold=0.05)
    got = [(scp.lhs_text, scp.rhs, f"{scp.rate:.2f}", scp.support) for scp in mined]
    assert got == EXPECTED_PATTERNS, "\n".join(map(str, got))

    tokens = {tok for r in both for tok in r.term}
    singles = {e.text for e in lexicon.with_length(1)}
    assert tokens == singles, (len(tokens), len(singles))
    print(f"wrote {DATA_DIR / 'scl_opp.tsv'} ({len(lexicon)} entries) "
          f"and {DATA_DIR / 'scl_opp_pos.tsv'} ({len(pos_table)} phrases)")
    print("verified: counts, rule targets, mined patterns, token coverage")


def main() -> None:
    all_words = [w for lst in WORD_LISTS.values() for w in lst]
    all_words += [d for d, _ in DETERMINERS]
    dupes = [w for w, c in Counter(all_words).items() if c > 1]
    assert not dupes, f"duplicate fixture words: {dupes}"

    rng = np.random.default_rng(MASTER_SEED)
    specs = layout_phrases(rng)
    slot_keys, sizes, _ = size_pools(specs, rng)
    pools, scores = build_pools(sizes, rng)
    allocate_tokens(specs, slot_keys, pools, rng)
    repair_unused(specs, pools, scores)
    write_files(specs, scores)
    verify()


if __name__ == "__main__":
    main()
