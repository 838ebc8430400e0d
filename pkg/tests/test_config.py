import pytest

from snapens.config import build_datasets, parse_config, resolve_train_config
from snapens.errors import ConfigError

GOOD = """\
# spiral snapshot run
model.layers = 2,16,2
model.dropout = 0.0
schedule.kind = cyclic_cosine
schedule.alpha0 = 0.2
schedule.cycles = 4
train.mode = snapshot
train.epochs = 8
train.batch_size = 25
train.momentum = 0.9
train.seed = 11
data.source = two_moons
data.params = n=200,noise=0.1,seed=3,train_fraction=0.5
output.dir = runs/demo
"""


def write(tmp_path, text):
    path = tmp_path / "exp.cfg"
    path.write_text(text)
    return path


def test_parse_full_config(tmp_path):
    cfg = parse_config(write(tmp_path, GOOD))
    assert cfg.model.layer_sizes == (2, 16, 2)
    assert cfg.schedule_kind == "cyclic_cosine"
    assert cfg.alpha0 == 0.2
    assert cfg.cycles == 4
    assert cfg.mode == "snapshot"
    assert cfg.epochs == 8
    assert cfg.batch_size == 25
    assert cfg.seed == 11
    assert cfg.data_source == "two_moons"
    assert cfg.data_params["n"] == "200"
    assert cfg.output_dir == "runs/demo"


def test_inline_comments_and_blank_lines(tmp_path):
    text = GOOD.replace("train.seed = 11", "train.seed = 11   # reproducibility\n\n")
    assert parse_config(write(tmp_path, text)).seed == 11


def test_unknown_key_rejected(tmp_path):
    with pytest.raises(ConfigError, match="train.optimizer"):
        parse_config(write(tmp_path, GOOD + "train.optimizer = adam\n"))


def test_duplicate_key_rejected(tmp_path):
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config(write(tmp_path, GOOD + "train.seed = 12\n"))


def test_missing_required_key(tmp_path):
    text = GOOD.replace("train.epochs = 8\n", "")
    with pytest.raises(ConfigError, match="train.epochs"):
        parse_config(write(tmp_path, text))


def test_missing_cycles_for_snapshot_mode(tmp_path):
    text = GOOD.replace("schedule.cycles = 4\n", "")
    with pytest.raises(ConfigError, match="schedule.cycles"):
        parse_config(write(tmp_path, text))


def test_cycles_rejected_for_single_mode(tmp_path):
    text = GOOD.replace("schedule.kind = cyclic_cosine", "schedule.kind = step")
    text = text.replace("train.mode = snapshot", "train.mode = single")
    with pytest.raises(ConfigError, match="schedule.cycles"):
        parse_config(write(tmp_path, text))


def test_unknown_mode_and_kind(tmp_path):
    with pytest.raises(ConfigError, match="train.mode"):
        parse_config(write(tmp_path, GOOD.replace("mode = snapshot", "mode = adamw")))
    with pytest.raises(ConfigError, match="schedule.kind"):
        parse_config(write(tmp_path, GOOD.replace("kind = cyclic_cosine", "kind = linear")))


def test_bad_data_param_key(tmp_path):
    text = GOOD.replace("n=200,", "count=200,")
    with pytest.raises(ConfigError, match="count"):
        parse_config(write(tmp_path, text))


def test_step_fractions_parsing(tmp_path):
    text = GOOD.replace("schedule.kind = cyclic_cosine", "schedule.kind = step")
    text = text.replace("train.mode = snapshot", "train.mode = nocycle")
    text += "schedule.step_fractions = 0.4:0.5,0.8:0.2\n"
    cfg = parse_config(write(tmp_path, text))
    assert cfg.step_fractions == ((0.4, 0.5), (0.8, 0.2))


def test_mode_kind_mismatch_surfaces_at_resolve(tmp_path):
    text = GOOD.replace("schedule.kind = cyclic_cosine", "schedule.kind = step")
    cfg = parse_config(write(tmp_path, text))
    with pytest.raises(ConfigError, match="schedule.kind"):
        resolve_train_config(cfg, n_train=100)


def test_resolve_computes_total_iterations(tmp_path):
    cfg = parse_config(write(tmp_path, GOOD))
    config = resolve_train_config(cfg, n_train=100)
    assert config.schedule.total_iterations == 8 * 4  # ceil(100/25) = 4 batches
    assert config.mode == "snapshot"
    assert config.snapshot_count is None


def test_resolve_nocycle_uses_cycles_as_snapshot_count(tmp_path):
    text = GOOD.replace("schedule.kind = cyclic_cosine", "schedule.kind = step")
    text = text.replace("train.mode = snapshot", "train.mode = nocycle")
    cfg = parse_config(write(tmp_path, text))
    config = resolve_train_config(cfg, n_train=100)
    assert config.snapshot_count == 4
    assert config.schedule.kind == "step"


def test_build_datasets_split_sizes(tmp_path):
    cfg = parse_config(write(tmp_path, GOOD))
    train_set, test_set = build_datasets(cfg)
    assert len(train_set) == 100 and len(test_set) == 100
    assert train_set.class_count == 2


def test_build_datasets_normalize_flag(tmp_path):
    text = GOOD.replace(
        "data.params = n=200,noise=0.1,seed=3,train_fraction=0.5",
        "data.params = n=200,noise=0.1,seed=3,train_fraction=0.5,normalize=true",
    )
    cfg = parse_config(write(tmp_path, text))
    train_set, _ = build_datasets(cfg)
    assert abs(train_set.inputs.mean()) < 1e-9


def test_csv_source_requires_path(tmp_path):
    text = GOOD.replace("data.source = two_moons", "data.source = csv")
    text = text.replace("data.params = n=200,noise=0.1,seed=3,train_fraction=0.5\n", "")
    cfg = parse_config(write(tmp_path, text))
    with pytest.raises(ConfigError, match="path"):
        build_datasets(cfg)


def test_malformed_line_rejected(tmp_path):
    with pytest.raises(ConfigError, match="key = value"):
        parse_config(write(tmp_path, GOOD + "just some words\n"))
