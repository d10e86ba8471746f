import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metaseg.corpus_io import (
    CorpusFile,
    dumps_corpus,
    generate_synthetic,
    load_corpus,
    loads_corpus,
    save_corpus,
    simulate_poses,
)
from metaseg.errors import CorpusIOError, InvariantViolation, SchemaError
from metaseg.trajectory import LowLevelAction as A

MINIMAL = {
    "version": "1.0",
    "episodes": [
        {
            "id": "ep0",
            "goal": "put a mug in the sink",
            "sub_goals": ["walk to the counter", "pick up the mug"],
            "actions": ["RotateLeft", "MoveAhead", "MoveAhead", "RotateRight", "PickupObject"],
            "subgoal_index": [0, 0, 0, 0, 1],
        }
    ],
}


def episode(**changes):
    data = json.loads(json.dumps(MINIMAL))
    data["episodes"][0].update(changes)
    return json.dumps(data)


def test_minimal(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(MINIMAL))
    corpus = load_corpus(path)
    assert len(corpus) == 1
    assert corpus.episodes[0].letters == "lmmri"
    assert corpus.version == "1.0"


def test_decreasing_index():
    with pytest.raises(InvariantViolation) as info:
        loads_corpus(episode(subgoal_index=[0, 1, 1, 0, 1]))
    assert info.value.episode_index == 0


def test_unknown_action():
    with pytest.raises(SchemaError) as info:
        loads_corpus(episode(actions=["MoveAhead", "Jump", "MoveAhead", "MoveAhead", "MoveAhead"]))
    assert info.value.field == "actions" and info.value.episode_index == 0
    with pytest.raises(SchemaError):
        loads_corpus(episode(actions=["moveahead"] * 5))


@pytest.mark.parametrize(
    "changes, field",
    [
        ({"goal": 3}, "goal"),
        ({"sub_goals": "x"}, "sub_goals"),
        ({"subgoal_index": [0, 0, 0, 0, "1"]}, "subgoal_index"),
        ({"poses": [[0, 0]] * 5 + [[0]]}, "poses"),
        ({"goal_conditions": [1, 0]}, "goal_conditions"),
        ({"pred_len": -1}, "pred_len"),
        ({"ref_path": "nope"}, "ref_path"),
        ({"colour": "red"}, "colour"),
    ],
)
def test_schema_errors(changes, field):
    with pytest.raises(SchemaError) as info:
        loads_corpus(episode(**changes))
    assert info.value.field == field


def test_poses_length_invariant():
    with pytest.raises(InvariantViolation):
        loads_corpus(episode(poses=[[0, 0]] * 5))
    loads_corpus(episode(poses=[[0, 0]] * 6))


def test_top_level_errors(tmp_path):
    with pytest.raises(SchemaError):
        loads_corpus("[]")
    with pytest.raises(SchemaError):
        loads_corpus('{"episodes": []}')
    with pytest.raises(SchemaError):
        loads_corpus("{not json")
    with pytest.raises(CorpusIOError):
        load_corpus(tmp_path / "missing.json")


def test_round_trip(tmp_path):
    corpus = generate_synthetic(3, 20, 30)
    path = tmp_path / "c.json"
    save_corpus(corpus, path)
    again = load_corpus(path)
    assert again == corpus
    assert dumps_corpus(again) == dumps_corpus(corpus)


def test_round_trip_with_lengths():
    text = episode(goal_conditions=[True, False], pred_len=12.5, ref_len=10,
                   pred_path=[[0, 0], [1, 0]], ref_path=[[0, 0], [0, 1]])
    c = loads_corpus(text)
    assert loads_corpus(dumps_corpus(c)) == c
    r = c.episodes[0].result()
    assert r.pred_length == 12.5 and r.ref_length == 10.0 and r.gc_ratio == 0.5


def test_synthetic_deterministic():
    a = dumps_corpus(generate_synthetic(7, 10, 50))
    assert a == dumps_corpus(generate_synthetic(7, 10, 50))
    assert a != dumps_corpus(generate_synthetic(8, 10, 50))
    assert len(generate_synthetic(7, 10, 50)) == 10


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 8), st.integers(1, 80))
def test_synthetic_validates(seed, n, mean_len):
    corpus = generate_synthetic(seed, n, mean_len)
    assert loads_corpus(dumps_corpus(corpus)) == corpus
    for ep in corpus:
        t = ep.trajectory
        assert len(t.poses) == len(t) + 1
        assert t.subgoal_index[-1] == len(t.sub_goals) - 1
        # sub-goals only advance right after an interaction
        for k in range(1, len(t)):
            if t.subgoal_index[k] != t.subgoal_index[k - 1]:
                assert t.actions[k - 1].is_interaction


def test_synthetic_mean_length():
    corpus = generate_synthetic(11, 1000, 50)
    mean = np.mean([len(ep.trajectory) for ep in corpus])
    assert 40 <= mean <= 60


def test_simulate_poses():
    poses = simulate_poses([A.MoveAhead, A.RotateLeft, A.MoveAhead, A.LookUp, A.RotateRight,
                            A.RotateRight, A.MoveAhead])
    assert poses[-1] == (0.0, 1.0)
    assert poses[2] == (0.0, 1.0) and poses[3] == (-1.0, 1.0)
