import json
import math

import pytest

import semadapt as sa


def test_timing_examples():
    assert sa.slot_timing(0) == (1.0, 1.0 / 14.0)
    assert sa.available_window(4, 7, 0.2, 1) == pytest.approx(0.8)
    assert sa.available_window(1, 2, 0.1, 2) == 0.0
    slack, debt = sa.slack_and_debt(8.4, 6.0)
    assert slack == pytest.approx(-2.4)
    assert debt == pytest.approx(0.4)
    full = sa.nominal_latency(sa.Primitive.FullRetrain)
    assert (full.ric_ms, full.total_ms) == (5.0, 8.4)


def test_environment_episode_with_shield():
    env = sa.Environment()
    obs = env.reset(42)
    assert len(obs) == 6 * 8 + 1
    assert obs == sa.Environment().reset(42)
    steps = 0
    while not env.done:
        proposal = sa.Action(sa.Primitive.FullRetrain, [True] * env.n_ues)
        action, limit_drops, budget_drops, fallbacks = env.shield(proposal)
        assert env.is_feasible(action)
        out = env.step(action)
        assert out["overshoot_ms"] == 0.0
        assert all(out["deadline_hit"][i] for i in range(8) if action.mask[i])
        steps += 1
    assert steps == 200
    with pytest.raises(RuntimeError):
        env.step(sa.Action.noop(8))


def test_gae_and_duals():
    adv, ret = sa.gae([0.5, 2.0], [1.0], 0.9, 0.95)
    assert adv[0] == pytest.approx(1.0 + 0.9 * 2.0 - 0.5)
    assert ret[0] == pytest.approx(1.0 + 0.9 * 2.0)
    lam = sa.dual_update([0.1, 0.0], [3.0, 0.0], [2.0, 0.0], ema=0.0)
    assert lam[0] == pytest.approx(0.101)
    lam = sa.dual_update([0.1, 0.0], [3.0, 0.0], [2.0, 0.0], ema=0.9)
    assert lam[0] == pytest.approx(0.1001)


def test_config_validation():
    cfg = sa.default_config()
    assert cfg["env"]["n_ues"] == 8
    assert sa.validate_config(cfg) == cfg
    cfg["env"]["n_ues"] = 7
    with pytest.raises(sa.ConfigError, match="8, 16"):
        sa.validate_config(cfg)
    with pytest.raises(ValueError, match="env.bogus"):
        sa.validate_config({"env": {"bogus": 1}})
    assert sa.config_hash(sa.default_config()) != sa.config_hash({"train": {"updates": 7}})


def test_run_and_summarize(tmp_path):
    cfg = sa.default_config()
    cfg["env"]["episode_frames"] = 20
    cfg["train"].update({"hidden": [8], "rollout_length": 16, "updates": 2})
    cfg["experiment"].update({"agents": ["tcppo", "random"], "seeds": [42], "eval_episodes": 2})
    manifest = sa.run(cfg, tmp_path)
    assert manifest["status"] == "ok"
    assert len(manifest["runs"]) == 2
    summary = sa.summarize(tmp_path)
    assert set(summary["eval"]) == {"tcppo", "random"}
    assert summary["eval"]["tcppo"]["hit_rate"]["mean"] == 1.0
    assert math.isfinite(summary["eval"]["random"]["mean_reward"]["mean"])
    assert json.loads((tmp_path / "manifest.json").read_text())["config_hash"] == manifest["config_hash"]


def test_cli_exit_codes(tmp_path):
    code, _, err = sa.cli(["report", str(tmp_path)])
    assert code == 2 and "no metrics found" in err
    code, _, _ = sa.cli(["train"])
    assert code == 1
