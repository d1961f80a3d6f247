"""Benchmark game constructors: Kuhn poker, Leduc-k hold'em, matrix games.

Leduc-k is played with a deck of 2k cards (two copies of each rank 1..k).
Both players ante one chip and receive one private card; a betting round
follows, then one community card is dealt face up, then a second betting
round. At showdown a player pairing the community card wins the pot,
otherwise the higher private card wins; equal private cards split the pot.
Folding loses the folder's contribution. Betting uses a fixed bet size per
round with a cap on the number of wagers (bet plus raises); player 0 acts
first in both rounds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .game_model import ExtensiveFormGame, GameBuilder, PolytopeGame


@dataclass(frozen=True)
class LeducConfig:
    """Rule parameters for Leduc-k; defaults give the standard 6-card Leduc."""

    k: int = 3
    ante: int = 1
    round1_bet: int = 2
    round2_bet: int = 4
    max_raises_per_round: int = 2

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError("need k >= 2 (deck of at least 4 cards, 3 after the deal)")
        if min(self.ante, self.round1_bet, self.round2_bet) <= 0:
            raise ValueError("chip amounts must be positive")
        if self.max_raises_per_round < 1:
            raise ValueError("need at least one wager per round")

    @property
    def deck_size(self) -> int:
        return 2 * self.k


def build_leduc(config: LeducConfig = LeducConfig()) -> ExtensiveFormGame:
    """Build the Leduc-k game tree for the given rule parameters.

    The private deal is a single chance node over all ordered pairs of
    distinct cards; the community card is a chance node over the remaining
    deck. Information sets key on the acting player's private rank, the
    community rank (if dealt), and the full betting line, so the two copies
    of a rank are indistinguishable.
    """
    b = GameBuilder()
    deck = config.deck_size

    def rank(card: int) -> int:
        return card // 2 + 1

    def showdown_utility(r0: int, r1: int, community: int, pot_each: int) -> float:
        if r0 == community and r1 != community:
            return float(pot_each)
        if r1 == community and r0 != community:
            return float(-pot_each)
        if r0 > r1:
            return float(pot_each)
        if r1 > r0:
            return float(-pot_each)
        return 0.0

    def betting(cards, round_no, community, line, prior_line, to_act, wagers, owed, contrib):
        """Build the subtree at a betting decision point; returns a node id.

        ``owed`` is the amount the acting player must match, ``wagers`` counts
        bets and raises made this round, ``contrib`` holds both players' total
        contributions, ``line`` is this round's action string and
        ``prior_line`` the earlier rounds' (with a trailing separator).
        """
        bet = config.round1_bet if round_no == 1 else config.round2_bet
        actions: list[str] = []
        children: list[int] = []

        def round_over(final_line, final_contrib):
            if round_no == 1:
                return community_deal(cards, final_line, final_contrib)
            return b.terminal(
                showdown_utility(rank(cards[0]), rank(cards[1]), community, final_contrib[0])
            )

        if owed == 0:
            # Nothing owed only at the round's start or after a single check.
            actions.append("k")
            if line == "k":
                children.append(round_over(prior_line + "kk", contrib))
            else:
                children.append(
                    betting(cards, round_no, community, "k", prior_line,
                            1 - to_act, wagers, 0, contrib)
                )
            if wagers < config.max_raises_per_round:
                actions.append("b")
                nc = list(contrib)
                nc[to_act] += bet
                children.append(
                    betting(cards, round_no, community, line + "b", prior_line,
                            1 - to_act, wagers + 1, bet, tuple(nc))
                )
        else:
            actions.append("f")
            children.append(b.terminal(float(contrib[1]) if to_act == 1 else float(-contrib[0])))
            actions.append("c")
            nc = list(contrib)
            nc[to_act] += owed
            children.append(round_over(prior_line + line + "c", tuple(nc)))
            if wagers < config.max_raises_per_round:
                actions.append("r")
                nr = list(contrib)
                nr[to_act] += owed + bet
                children.append(
                    betting(cards, round_no, community, line + "r", prior_line,
                            1 - to_act, wagers + 1, bet, tuple(nr))
                )

        key = (rank(cards[to_act]), community, prior_line + line)
        return b.decision(to_act, key, actions, children)

    def community_deal(cards, round1_line, contrib):
        remaining = [c for c in range(deck) if c not in cards]
        children = [
            betting(cards, 2, rank(c), "", round1_line + "/", 0, 0, 0, contrib)
            for c in remaining
        ]
        probs = [1.0 / len(remaining)] * len(remaining)
        return b.chance(probs, children, labels=[f"c{c}" for c in remaining])

    deal_children, deal_labels, deal_probs = [], [], []
    n_pairs = deck * (deck - 1)
    for c0 in range(deck):
        for c1 in range(deck):
            if c0 == c1:
                continue
            deal_children.append(
                betting((c0, c1), 1, None, "", "", 0, 0, 0, (config.ante, config.ante))
            )
            deal_labels.append(f"d{c0}.{c1}")
            deal_probs.append(1.0 / n_pairs)
    root = b.chance(deal_probs, deal_children, labels=deal_labels)
    return b.build(root)


def build_kuhn() -> ExtensiveFormGame:
    """Standard three-card Kuhn poker: ante 1, single bet of 1, no raises.

    Yields six information sets per player; the game value for the first
    player is -1/18 under optimal play.
    """
    b = GameBuilder()
    cards = (1, 2, 3)

    def showdown(r0, r1, amount):
        return b.terminal(float(amount) if r0 > r1 else float(-amount))

    def subtree(r0, r1):
        # Player 1 replies to a bet: fold or call.
        def reply(bettor, line):
            responder = 1 - bettor
            fold = b.terminal(1.0 if responder == 1 else -1.0)
            call = showdown(r0, r1, 2)
            key = ((r0 if responder == 0 else r1), line)
            return b.decision(responder, key, ("f", "c"), (fold, call))

        p2_after_check = b.decision(
            1, (r1, "k"), ("k", "b"),
            (showdown(r0, r1, 1), reply(1, "kb")),
        )
        p2_after_bet = reply(0, "b")
        return b.decision(0, (r0, ""), ("k", "b"), (p2_after_check, p2_after_bet))

    children, probs, labels = [], [], []
    for r0 in cards:
        for r1 in cards:
            if r0 == r1:
                continue
            children.append(subtree(r0, r1))
            probs.append(1.0 / 6.0)
            labels.append(f"d{r0}.{r1}")
    return b.build(b.chance(probs, children, labels=labels))


def embed_matrix_game(payoff) -> ExtensiveFormGame:
    """Represent a matrix game as a depth-2 tree with hidden first move.

    Player 0 picks a row, player 1 picks a column without observing the row
    (all its nodes share one information set), and the terminal pays the
    matrix entry.
    """
    payoff = np.asarray(payoff, dtype=np.float64)
    n, m = payoff.shape
    b = GameBuilder()
    col_actions = tuple(f"c{j}" for j in range(m))
    rows = []
    for i in range(n):
        terms = [b.terminal(payoff[i, j]) for j in range(m)]
        rows.append(b.decision(1, "col", col_actions, terms))
    root = b.decision(0, "row", tuple(f"r{i}" for i in range(n)), rows)
    return b.build(root)


class MatrixGameParseError(ValueError):
    pass


def parse_matrix_game(text: str, source: str = "<string>") -> PolytopeGame:
    """Parse the plain-text matrix game format.

    Line 1 holds "n m"; the next n lines each hold m whitespace-separated
    payoffs for the row player. Errors carry the line and column of the
    offending token.
    """
    lines = text.splitlines()
    if not lines:
        raise MatrixGameParseError(f"{source}:1: empty file")
    header = lines[0].split()
    if len(header) != 2:
        raise MatrixGameParseError(f"{source}:1: expected 'n m', got {lines[0]!r}")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError as e:
        raise MatrixGameParseError(f"{source}:1: {e}") from None
    if n < 1 or m < 1:
        raise MatrixGameParseError(f"{source}:1: dimensions must be positive")
    rows = [ln for ln in lines[1:] if ln.strip()]
    if len(rows) != n:
        raise MatrixGameParseError(f"{source}: expected {n} payoff rows, found {len(rows)}")
    payoff = np.zeros((n, m))
    for i, ln in enumerate(rows):
        entries = ln.split()
        if len(entries) != m:
            raise MatrixGameParseError(
                f"{source}:{i + 2}: expected {m} entries, found {len(entries)}"
            )
        for j, tok in enumerate(entries):
            try:
                payoff[i, j] = float(tok)
            except ValueError:
                raise MatrixGameParseError(
                    f"{source}:{i + 2}: column {j + 1}: {tok!r} is not a number"
                ) from None
    if not np.all(np.isfinite(payoff)):
        raise MatrixGameParseError(f"{source}: payoff entries must be finite")
    return PolytopeGame.from_matrix(payoff)


def load_matrix_game(path) -> PolytopeGame:
    path = Path(path)
    return parse_matrix_game(path.read_text(), source=str(path))


_SELECTORS = "kuhn | leduc3 | leduc5 | leduc:k=<K> | matrix:<path>"


def build_game(selector: str) -> ExtensiveFormGame:
    """Build a game tree from a CLI selector string."""
    if selector == "kuhn":
        return build_kuhn()
    if selector == "leduc3":
        return build_leduc(LeducConfig(k=3))
    if selector == "leduc5":
        return build_leduc(LeducConfig(k=5))
    m = re.fullmatch(r"leduc:k=(\d+)", selector)
    if m:
        return build_leduc(LeducConfig(k=int(m.group(1))))
    if selector.startswith("matrix:"):
        return embed_matrix_game(load_matrix_game(selector[len("matrix:"):]).payoff)
    raise ValueError(f"unknown game selector {selector!r}; expected one of: {_SELECTORS}")
