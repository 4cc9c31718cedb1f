"""End-to-end tests for the command-line interface and its exit codes."""

import json

import pytest

from cycover import cli
from cycover.cover import default_prime, random_instance, sample_point_off_branch
from cycover.family import validate_family
from cycover.parsing import default_instance_text, parse_instance_file
from cycover.poly import PrimeField
from cycover.report import (
    VERDICT_CERTIFIED,
    VERDICT_INCONCLUSIVE,
    VERDICT_REFUTED,
    VERDICT_UNSUPPORTED,
    reports_equal_modulo_timings,
)

WORKHORSE = validate_family(5, 4, 2, 2)
PRIME = default_prime(WORKHORSE)

QUADRIC_FILE = """\
# quadric cover; the base hypersurface is singular at (0,0,0,1,0,0,0)
M = 5
m = 2
l = 4
K = 2
f = x0*x1 + x2^2
g = x0^8 + x1^8 + x2^8 + x3^8 + x4^8 + x5^8 + x6^8
"""

GENERALIZED_FILE = """\
M = 5
m = 4
l = 2
K = 2
f = x0^3*x1 + x1^4 - x2^4 + x3^4 + x4^4 + x5^4 + x6^4
g2 = x0^4 + x1^4
"""


def run_cli(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture(scope="module")
def workhorse_file(tmp_path_factory):
    instance = random_instance(WORKHORSE, 42, PrimeField(PRIME))
    path = tmp_path_factory.mktemp("cli") / "workhorse.inst"
    path.write_text(default_instance_text(instance, seed=11))
    return str(path)


@pytest.fixture(scope="module")
def quadric_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "quadric.inst"
    path.write_text(QUADRIC_FILE)
    return str(path)


class TestFamilyAndBound:
    def test_family_reports_invariants(self, capsys):
        code, out, _ = run_cli(["family", "5", "4", "2", "2"], capsys)
        assert code == cli.EXIT_CERTIFIED
        doc = json.loads(out)
        record = doc["records"][0]
        assert record["degree"] == 8
        assert record["branch_degree"] == 4
        assert doc["summary"]["verdict"] == VERDICT_CERTIFIED

    def test_family_violating_relation_exits_2(self, capsys):
        code, _, err = run_cli(["family", "5", "4", "2", "3"], capsys)
        assert code == cli.EXIT_INPUT_ERROR
        assert "differs from dimension" in err

    def test_bound_supported_family(self, capsys):
        code, out, _ = run_cli(["bound", "7", "5", "3", "2"], capsys)
        assert code == cli.EXIT_CERTIFIED
        doc = json.loads(out)
        main = next(r for r in doc["records"] if r["case"] == "MainCase")
        assert main["bound"] == "9/25"
        assert main["threshold"] == "2/5"
        assert main["comparison"] == "StrictlyBelow"
        assert main["schedule_product"] == "25/9"
        ramified = next(r for r in doc["records"] if r["case"] == "RamifiedCase")
        assert ramified["comparison"] == "Equal"
        assert ramified["margin"] == "0/1"

    def test_bound_partially_supported_family_is_inconclusive(self, capsys):
        # branch weight 2 is outside the off-branch ordering's range
        code, out, _ = run_cli(["bound", "5", "4", "2", "2"], capsys)
        assert code == cli.EXIT_INCONCLUSIVE
        doc = json.loads(out)
        main = next(r for r in doc["records"] if r["case"] == "MainCase")
        assert main["applies"] is False
        assert main["verdict"] == VERDICT_UNSUPPORTED


class TestSeriesAndParse:
    def test_series_table_and_self_check(self, capsys):
        code, out, _ = run_cli(["series", "2", "6", "--seed", "5"], capsys)
        assert code == cli.EXIT_CERTIFIED
        doc = json.loads(out)
        table = doc["records"][0]
        assert table["coefficients"][:3] == ["1/2", "-1/8", "1/16"]
        check = doc["records"][1]
        assert check["kind"] == "root-self-check"
        assert check["verdict"] == VERDICT_CERTIFIED

    def test_series_rejects_bad_root_index(self, capsys):
        code, _, err = run_cli(["series", "1", "6"], capsys)
        assert code == cli.EXIT_INPUT_ERROR
        assert "at least 2" in err

    def test_parse_prints_canonical_form(self, capsys):
        code, out, _ = run_cli(
            ["parse", "x0 + x0", "--vars", "x0,x1"], capsys
        )
        assert code == cli.EXIT_CERTIFIED
        assert json.loads(out)["summary"]["canonical"] == "2*x0"

    def test_parse_syntax_error_exits_2(self, capsys):
        code, _, err = run_cli(["parse", "2x0", "--vars", "x0"], capsys)
        assert code == cli.EXIT_INPUT_ERROR
        assert "line 1, column 2" in err


class TestLocalize:
    def test_smooth_point(self, quadric_file, capsys):
        code, out, _ = run_cli(
            ["localize", quadric_file, "--point", "1,0,0,1/2,0,0,0"], capsys
        )
        assert code == cli.EXIT_CERTIFIED
        record = json.loads(out)["records"][0]
        assert record["pivot"] == 0
        assert record["smooth"] is True
        assert record["case"] == "R1a"
        assert record["branch_position"] == "off"

    def test_singular_point_exits_1(self, quadric_file, capsys):
        code, out, _ = run_cli(
            ["localize", quadric_file, "--point", "0,0,0,1,0,0,0"], capsys
        )
        assert code == cli.EXIT_REFUTED
        record = json.loads(out)["records"][0]
        assert record["smooth"] is False
        assert record["verdict"] == VERDICT_REFUTED

    def test_point_off_the_hypersurface_exits_2(self, quadric_file, capsys):
        code, _, err = run_cli(
            ["localize", quadric_file, "--point", "1,1,1,0,0,0,0"], capsys
        )
        assert code == cli.EXIT_INPUT_ERROR
        assert "does not lie on the base hypersurface" in err

    def test_wrong_coordinate_count_exits_2(self, quadric_file, capsys):
        code, _, err = run_cli(
            ["localize", quadric_file, "--point", "1,0,0"], capsys
        )
        assert code == cli.EXIT_INPUT_ERROR
        assert "7" in err


class TestCertify:
    def test_sampled_points_certify(self, workhorse_file, capsys):
        code, out, _ = run_cli(
            [
                "certify",
                workhorse_file,
                "--points-off",
                "1",
                "--points-on",
                "1",
            ],
            capsys,
        )
        assert code == cli.EXIT_CERTIFIED
        doc = json.loads(out)
        assert doc["summary"]["verdict"] == VERDICT_CERTIFIED
        assert doc["summary"]["certified"] == 2
        cases = {r["case"] for r in doc["records"]}
        assert cases == {"R1a", "R2"}
        off = next(r for r in doc["records"] if r["case"] == "R1a")
        labels = [c["label"] for c in off["order_checks"]]
        assert labels == [
            "hypertangent level 1",
            "hypertangent level 2",
            "hypertangent level 3",
        ]
        on = next(r for r in doc["records"] if r["case"] == "R2")
        assert [c["label"] for c in on["order_checks"]] == [
            "branch truncation level 1"
        ]

    def test_reports_are_deterministic_modulo_timings(
        self, workhorse_file, capsys
    ):
        argv = [
            "certify",
            workhorse_file,
            "--points-off",
            "1",
            "--points-on",
            "0",
            "--seed",
            "9",
        ]
        _, first, _ = run_cli(argv, capsys)
        _, second, _ = run_cli(argv, capsys)
        assert reports_equal_modulo_timings(first, second)
        assert first != second  # timings differ

    def test_explicit_smooth_point(self, workhorse_file, capsys):
        document = parse_instance_file(open(workhorse_file).read())
        point = sample_point_off_branch(document.instance, 77)
        spec = ",".join(str(int(c)) for c in point)
        code, out, _ = run_cli(
            ["certify", workhorse_file, "--point", spec], capsys
        )
        assert code == cli.EXIT_CERTIFIED
        record = json.loads(out)["records"][0]
        assert record["source"] == "explicit"
        assert record["regularity"]["outcome"] == "CertifiedRegular"

    def test_singular_requested_point_reported_and_exit_1(
        self, quadric_file, capsys
    ):
        code, out, _ = run_cli(
            ["certify", quadric_file, "--point", "0,0,0,1,0,0,0"], capsys
        )
        assert code == cli.EXIT_REFUTED
        record = json.loads(out)["records"][0]
        assert record["smooth"] is False
        assert record["verdict"] == VERDICT_REFUTED
        assert "singular" in record["reason"]

    def test_degenerate_instance_refuted_honestly(self, quadric_file, capsys):
        # This sparse instance has vanishing mid-degree branch pieces in the
        # pivot chart, so the stated sequence contains zeros: a genuine
        # refutation of regularity, reported with the failing prefix.
        code, out, _ = run_cli(
            ["certify", quadric_file, "--point", "1,0,0,0,0,0,0"], capsys
        )
        assert code == cli.EXIT_REFUTED
        record = json.loads(out)["records"][0]
        assert record["regularity"]["outcome"] == "RefutedAtPrefix"
        assert record["regularity"]["refuted_prefix"] == 3

    def test_generalized_instance_unsupported_exit_3(self, tmp_path, capsys):
        path = tmp_path / "generalized.inst"
        path.write_text(GENERALIZED_FILE)
        code, out, _ = run_cli(["certify", str(path)], capsys)
        assert code == cli.EXIT_INCONCLUSIVE
        doc = json.loads(out)
        assert doc["records"][0]["verdict"] == VERDICT_UNSUPPORTED
        assert "generalized" in doc["records"][0]["reason"]
        assert doc["summary"]["verdict"] == VERDICT_UNSUPPORTED

    def test_instance_file_error_exits_2(self, tmp_path, capsys):
        path = tmp_path / "broken.inst"
        path.write_text("M = 5\nm = 4\nl = 2\nK = 2\nf = x0^\ng = x0^4\n")
        code, _, err = run_cli(["certify", str(path)], capsys)
        assert code == cli.EXIT_INPUT_ERROR
        assert "line 5" in err

    def test_prime_not_1_mod_k_rejected(self, tmp_path, capsys):
        # K = 3 needs a prime that is 1 mod 3; 101 is not.
        family = validate_family(5, 2, 2, 3)
        instance = random_instance(family, 3)
        path = tmp_path / "cubic.inst"
        path.write_text(default_instance_text(instance))
        code, _, err = run_cli(
            ["certify", str(path), "--prime", "101"], capsys
        )
        assert code == cli.EXIT_INPUT_ERROR
        assert "1 mod 3" in err

    def test_conflicting_prime_override_rejected(self, workhorse_file, capsys):
        code, _, err = run_cli(
            ["certify", workhorse_file, "--prime", "13"], capsys
        )
        assert code == cli.EXIT_INPUT_ERROR
        assert "cannot be rechecked" in err


class TestCampaign:
    def test_small_campaign_certifies(self, capsys):
        code, out, _ = run_cli(
            [
                "campaign",
                "--family",
                "5,4,2,2",
                "--trials",
                "1",
                "--points-off",
                "1",
                "--points-on",
                "1",
                "--seed",
                "3",
            ],
            capsys,
        )
        assert code == cli.EXIT_CERTIFIED
        doc = json.loads(out)
        assert doc["summary"]["points_checked"] == 2
        assert doc["summary"]["pass_rate"] == "1/1"
        assert doc["summary"]["refutations"] == []
        record = doc["records"][0]
        assert record["trial"] == 0
        assert set(record["seeds"]) == {"instance", "point"}

    def test_worker_count_does_not_change_report(self, capsys):
        argv = [
            "campaign",
            "--family",
            "5,4,2,2",
            "--trials",
            "2",
            "--points-off",
            "1",
            "--points-on",
            "0",
            "--seed",
            "4",
        ]
        _, serial, _ = run_cli(argv, capsys)
        _, parallel, _ = run_cli(argv + ["--workers", "4"], capsys)
        assert reports_equal_modulo_timings(serial, parallel)

    def test_fixed_instance_campaign(self, workhorse_file, capsys):
        code, out, _ = run_cli(
            [
                "campaign",
                workhorse_file,
                "--trials",
                "2",
                "--points-off",
                "1",
                "--points-on",
                "0",
                "--seed",
                "5",
            ],
            capsys,
        )
        assert code == cli.EXIT_CERTIFIED
        doc = json.loads(out)
        assert doc["options"]["fixed_instance"] is True
        # different trials sample different points on the same instance
        points = [tuple(r["point"]) for r in doc["records"]]
        assert len(set(points)) == 2

    def test_requires_exactly_one_source(self, workhorse_file, capsys):
        code, _, err = run_cli(["campaign"], capsys)
        assert code == cli.EXIT_INPUT_ERROR
        assert "exactly one instance source" in err
        code, _, err = run_cli(
            ["campaign", workhorse_file, "--family", "5,4,2,2"], capsys
        )
        assert code == cli.EXIT_INPUT_ERROR

    def test_bad_prime_rejected_before_work(self, capsys):
        code, _, err = run_cli(
            [
                "campaign",
                "--family",
                "5,2,2,3",
                "--prime",
                "101",
                "--trials",
                "1000000",
            ],
            capsys,
        )
        assert code == cli.EXIT_INPUT_ERROR
        assert "1 mod 3" in err

    def test_malformed_family_spec(self, capsys):
        code, _, err = run_cli(
            ["campaign", "--family", "5,4,2"], capsys
        )
        assert code == cli.EXIT_INPUT_ERROR
        assert "four integers" in err

    def test_output_flag_writes_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        code, out, _ = run_cli(
            [
                "--output",
                str(target),
                "campaign",
                "--family",
                "5,4,2,2",
                "--trials",
                "1",
                "--points-off",
                "1",
                "--points-on",
                "0",
            ],
            capsys,
        )
        assert code == cli.EXIT_CERTIFIED
        assert out == ""
        doc = json.loads(target.read_text())
        assert doc["command"] == "campaign"

    def test_output_flag_accepted_after_subcommand(self, tmp_path, capsys):
        # The natural spelling puts the flag last; the short form must work
        # there too, and must win over a globally supplied path.
        target = tmp_path / "trailing.json"
        decoy = tmp_path / "decoy.json"
        code, out, _ = run_cli(
            ["family", "5", "4", "2", "2", "-o", str(target)], capsys
        )
        assert code == cli.EXIT_CERTIFIED
        assert out == ""
        assert json.loads(target.read_text())["command"] == "family"
        code, out, _ = run_cli(
            [
                "--output",
                str(decoy),
                "family",
                "5",
                "4",
                "2",
                "2",
                "--output",
                str(target),
            ],
            capsys,
        )
        assert code == cli.EXIT_CERTIFIED
        assert json.loads(target.read_text())["command"] == "family"


class TestOptionValidation:
    def test_check_options_validate(self):
        with pytest.raises(ValueError, match="arc count"):
            cli.CheckOptions(arc_count=0)
        with pytest.raises(ValueError, match="truncation order"):
            cli.CheckOptions(arc_order=1)
        with pytest.raises(ValueError, match="cut trials"):
            cli.CheckOptions(cut_trials=0)

    def test_certify_options_need_a_point(self):
        with pytest.raises(ValueError, match="at least one point"):
            cli.CertifyOptions(points_off=0, points_on=0)

    def test_campaign_config_validates_prime_and_counts(self):
        family = validate_family(5, 2, 2, 3)
        with pytest.raises(ValueError, match="1 mod 3"):
            cli.CampaignConfig(family=family, prime=101)
        with pytest.raises(ValueError, match="at least one trial"):
            cli.CampaignConfig(family=WORKHORSE, prime=PRIME, trials=0)
        with pytest.raises(ValueError, match="at least one point"):
            cli.CampaignConfig(
                family=WORKHORSE, prime=PRIME, points_off=0, points_on=0
            )

    def test_campaign_config_checks_fixed_instance_family(self):
        # the quadric file describes family (5, 2, 4, 2), not the workhorse
        with pytest.raises(ValueError, match="different family"):
            cli.CampaignConfig(
                family=WORKHORSE,
                prime=PRIME,
                instance_text=QUADRIC_FILE,
                points_off=1,
                points_on=0,
            )


class TestVerdictAggregation:
    def test_exit_codes_follow_worst_verdict(self):
        assert cli.exit_code_for(VERDICT_CERTIFIED) == 0
        assert cli.exit_code_for(VERDICT_REFUTED) == 1
        assert cli.exit_code_for(VERDICT_INCONCLUSIVE) == 3
        assert cli.exit_code_for(VERDICT_UNSUPPORTED) == 3
