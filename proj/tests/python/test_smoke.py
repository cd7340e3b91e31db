"""Smoke tests for the python bindings."""

import json
import math
import pathlib
import tempfile

import pytest

import convoscope


CHAIN = [
    {"id": "j", "parent_id": None, "author_id": "op",
     "created_at": "2021-06-01T10:00:00Z", "text": "climate root post"},
    {"id": "mid", "parent_id": "j", "author_id": "someone",
     "created_at": "2021-06-01T10:01:00Z", "text": "a reply"},
    {"id": "ans", "parent_id": "mid", "author_id": "watcher",
     "created_at": "2021-06-01T10:02:00Z", "text": "an answer @op"},
]


def test_version():
    assert convoscope.__version__


def test_conversation_structure():
    conv = convoscope.Conversation.build(CHAIN)
    assert conv.size == 3
    assert conv.root_id == "j"
    assert conv.root_author == "op"
    assert conv.parent_of("ans") == "mid"
    assert conv.parent_of("j") is None
    assert conv.children_of("j") == ["mid"]
    assert conv.depth_of("ans") == 2
    assert convoscope.depth(conv) == 2
    assert convoscope.branching_factor(conv) == 1.0
    assert convoscope.path_distance(conv, "j", "ans") == 2


def test_vision_worked_example():
    conv = convoscope.Conversation.build(CHAIN)
    assert convoscope.zeta(conv, "watcher", "j") == 0.5
    assert convoscope.theta(conv, "mid") == 1.0
    score = convoscope.seen_probability(conv, "watcher", "j")
    assert score["zeta"] == 0.5
    assert score["theta"] == 1.0
    assert score["combined"] == 1.0
    # op never replies: mean over {mid: theta 1.0, ans: theta 0.25}
    assert convoscope.author_baseline_vision(conv, "op") == pytest.approx(0.625)
    assert convoscope.author_baseline_vision(conv, "watcher") == 1.0


def test_invalid_tree_raises():
    posts = [dict(CHAIN[0]), dict(CHAIN[0])]
    with pytest.raises(convoscope.ConvoscopeError):
        convoscope.Conversation.build(posts)


def test_centralities_and_edges():
    conv = convoscope.Conversation.build(CHAIN)
    edges = convoscope.author_graph_edges(conv)
    assert ("someone", "op", 1) in edges
    assert ("watcher", "someone", 1) in edges
    scores = convoscope.centralities(conv)
    assert scores["betweenness"]["someone"] == 1.0
    assert scores["closeness"]["watcher"] == pytest.approx(1.5)
    norm = sum(v * v for v in scores["katz"].values())
    assert norm == pytest.approx(1.0)


def test_text_features_and_stats():
    urls, mentions = convoscope.extract_text_features("see https://a.example/x @alice")
    assert urls == ["https://a.example/x"]
    assert mentions == ["alice"]
    stats = convoscope.text_stats(CHAIN)
    assert stats["post_count"] == 3
    assert stats["mention_share"] == pytest.approx(1 / 3)


def test_generate_and_analyze_roundtrip():
    work = pathlib.Path(tempfile.mkdtemp(prefix="convoscope_py_"))
    config = {
        "seed": 11,
        "conversations": 25,
        "audience_size": 30,
        "profiles": [
            {"name": "talkers", "reply_propensity": 0.6, "attractiveness": 3.0,
             "group": "activist", "authors": 4},
        ],
    }
    out = convoscope.generate(config=json.dumps(config), out=str(work / "synth"))
    assert out["conversations"] == 25
    assert pathlib.Path(out["corpus"]).exists()

    report = convoscope.analyze(
        input=out["corpus"],
        out=str(work / "reports"),
        authors=out["registry"],
        min_posts=6,
        outliers="none",
        workers=2,
    )
    assert report["conversations_read"] == 25
    assert report["conversations_kept"] > 0
    files = {pathlib.Path(p).name for p in report["report_files"]}
    assert {"conversations.csv", "authors.csv", "groups.csv", "stats.csv"} <= files
    header = (work / "reports" / "conversations.csv").read_text().splitlines()[1]
    assert header.startswith("conversation,root_author,root_group,size")


def test_analyze_error_maps_to_exception():
    with pytest.raises(convoscope.ConvoscopeError):
        convoscope.analyze(input="/nonexistent.jsonl", out="/tmp/never")
