import pytest

from boxsums.config import ExperimentConfig, load_config, parse_config_text
from boxsums.errors import ConfigInvalidError


class TestParse:
    def test_basic_fields(self):
        cfg = parse_config_text(
            """
            mode = sweep
            prime = 101 1009
            n = 4
            seed = 7
            bound = s-all
            format = json
            """
        )
        assert cfg.mode == "sweep"
        assert cfg.primes == [101, 1009]
        assert cfg.n == [4]
        assert cfg.seed == 7
        assert cfg.bounds == ["s-all"]
        assert cfg.format == "json"

    def test_repeated_keys_extend(self):
        cfg = parse_config_text("prime = 5\nprime = 7 11\n")
        assert cfg.primes == [5, 7, 11]

    def test_comments_and_blank_lines(self):
        cfg = parse_config_text("# comment\n\nseed = 3\n")
        assert cfg.seed == 3

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigInvalidError):
            parse_config_text("primes = 5\n")

    def test_keys_case_sensitive(self):
        with pytest.raises(ConfigInvalidError):
            parse_config_text("Seed = 3\n")

    def test_missing_equals_rejected(self):
        with pytest.raises(ConfigInvalidError):
            parse_config_text("seed 3\n")

    def test_non_integer_rejected(self):
        with pytest.raises(ConfigInvalidError):
            parse_config_text("seed = abc\n")

    def test_lambda_implies_fixed_policy(self):
        cfg = parse_config_text("lambda = 3\n")
        assert cfg.lambda_policy == "fixed"
        assert cfg.lambda_value == 3

    def test_prime_range(self):
        cfg = parse_config_text("prime_range = 100 500\n")
        assert cfg.prime_range == (100, 500)
        with pytest.raises(ConfigInvalidError):
            parse_config_text("prime_range = 100\n")

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("mode = verify\nprime = 5 7\n", encoding="utf-8")
        cfg = load_config(str(path))
        assert cfg.mode == "verify"
        assert cfg.primes == [5, 7]


class TestValidate:
    def test_default_verify_needs_primes(self):
        cfg = ExperimentConfig(mode="verify")
        with pytest.raises(ConfigInvalidError):
            cfg.validate()

    def test_randomized_mode_needs_seed(self):
        cfg = ExperimentConfig(mode="sweep", primes=[101])
        with pytest.raises(ConfigInvalidError):
            cfg.validate()

    def test_unknown_mode(self):
        cfg = ExperimentConfig(mode="bogus", primes=[101])
        with pytest.raises(ConfigInvalidError):
            cfg.validate()

    def test_zero_exponent_rejected(self):
        cfg = ExperimentConfig(mode="verify", primes=[5], exponent_pool=[0, 1])
        with pytest.raises(ConfigInvalidError):
            cfg.validate()

    def test_all_cells_invalid_rejected(self):
        cfg = ExperimentConfig(mode="sweep", primes=[5], h=[7, 9], seed=0)
        with pytest.raises(ConfigInvalidError):
            cfg.validate()

    def test_some_cells_valid_ok(self):
        cfg = ExperimentConfig(mode="sweep", primes=[5, 101], h=[7], seed=0)
        cfg.validate()

    def test_prime_sweep_needs_range(self):
        cfg = ExperimentConfig(mode="prime-sweep")
        with pytest.raises(ConfigInvalidError):
            cfg.validate()

    def test_bad_threads_and_trials(self):
        with pytest.raises(ConfigInvalidError):
            ExperimentConfig(mode="verify", primes=[5], trials=0).validate()
        with pytest.raises(ConfigInvalidError):
            ExperimentConfig(mode="verify", primes=[5], threads=0).validate()
