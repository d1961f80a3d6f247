import pytest

from pcfr.games import LeducConfig, build_kuhn, build_leduc


@pytest.fixture(scope="session")
def kuhn():
    return build_kuhn()


@pytest.fixture(scope="session")
def leduc3():
    return build_leduc(LeducConfig(k=3))


def kuhn_equilibrium_profile(game, alpha: float):
    """The one-parameter Kuhn equilibrium family, alpha in [0, 1/3].

    Player 0 opens with jack at alpha and king at 3*alpha, checks the queen,
    and after check-bet folds the jack, calls the queen at alpha + 1/3, and
    always calls the king. Player 1 bluffs the jack behind a check at 1/3,
    always bets the king, and facing a bet folds the jack, calls the queen at
    1/3, and always calls the king.
    """
    from pcfr.game_model import BehavioralProfile

    profile = BehavioralProfile.uniform(game)
    by_key = {game.infosets[i].key: i for i in range(len(game.infosets))}

    def put(player, key, probs):
        iid = by_key[key]
        assert game.infosets[iid].player == player
        profile.set_infoset(iid, probs)

    put(0, (1, ""), (1 - alpha, alpha))          # (check, bet)
    put(0, (2, ""), (1.0, 0.0))
    put(0, (3, ""), (1 - 3 * alpha, 3 * alpha))
    put(0, (1, "kb"), (1.0, 0.0))                # (fold, call)
    put(0, (2, "kb"), (2 / 3 - alpha, alpha + 1 / 3))
    put(0, (3, "kb"), (0.0, 1.0))
    put(1, (1, "k"), (2 / 3, 1 / 3))             # (check, bet)
    put(1, (2, "k"), (1.0, 0.0))
    put(1, (3, "k"), (0.0, 1.0))
    put(1, (1, "b"), (1.0, 0.0))                 # (fold, call)
    put(1, (2, "b"), (2 / 3, 1 / 3))
    put(1, (3, "b"), (0.0, 1.0))
    return profile
