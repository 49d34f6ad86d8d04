"""CLI subcommands, file round-trips, and exit codes."""

import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "hecache"]


def run_cli(*args, **kwargs):
    return subprocess.run(CLI + list(args), capture_output=True, text=True, **kwargs)


@pytest.fixture(scope="module")
def keydir(tmp_path_factory):
    path = tmp_path_factory.mktemp("keys")
    out = run_cli("keygen", "--profile", "default", "--seed", "9", "--out", str(path))
    assert out.returncode == 0, out.stderr
    return path


class TestKeygen:
    def test_writes_key_files(self, keydir):
        for name in ("params.bin", "public_key.bin", "secret_key.bin"):
            assert (keydir / name).exists()

    def test_desk_profile(self, tmp_path):
        out = run_cli("keygen", "--profile", "desk", "--seed", "1",
                      "--out", str(tmp_path / "k"))
        assert out.returncode == 0


class TestEncDec:
    @pytest.mark.parametrize("scheme,value,precision,expect", [
        ("ckks", "3.14", "1", 3.14),
        ("smuche", "2.75", "0.25", 2.75),
        ("rache", "13", "1", 13.0),
        ("rache", "2.25", "0.25", 2.25),
    ])
    def test_roundtrip(self, keydir, tmp_path, scheme, value, precision, expect):
        ct = tmp_path / f"{scheme}.bin"
        out = run_cli("enc", "--scheme", scheme, "--value", value,
                      "--precision", precision, "--keys", str(keydir),
                      "--out", str(ct), "--seed", "77")
        assert out.returncode == 0, out.stderr
        dec = run_cli("dec", "--keys", str(keydir), "--in", str(ct))
        assert dec.returncode == 0, dec.stderr
        assert float(dec.stdout.strip()) == pytest.approx(expect, abs=1e-4)

    def test_missing_keys_dir_is_io_error(self, tmp_path):
        out = run_cli("enc", "--scheme", "ckks", "--value", "1",
                      "--keys", str(tmp_path / "absent"), "--out", str(tmp_path / "x"))
        assert out.returncode == 3

    def test_corrupt_ciphertext_is_io_error(self, keydir, tmp_path):
        bad = tmp_path / "bad.bin"
        bad.write_bytes(b"garbage")
        out = run_cli("dec", "--keys", str(keydir), "--in", str(bad))
        assert out.returncode == 3

    def test_negative_rache_value_is_usage_error(self, keydir, tmp_path):
        out = run_cli("enc", "--scheme", "rache", "--value", "-4",
                      "--keys", str(keydir), "--out", str(tmp_path / "x"))
        assert out.returncode == 1


class TestBench:
    def test_synthetic_markdown(self, tmp_path):
        report = tmp_path / "report.md"
        out = run_cli("bench", "--schemes", "ckks,smuche",
                      "--synthetic", "uniform(0,10):5", "--repeat", "1",
                      "--seed", "3", "--out", str(report))
        assert out.returncode == 0, out.stderr
        text = report.read_text()
        assert "| Scheme | nPivot | Messages |" in text
        assert "ckks" in text and "smuche" in text

    def test_dataset_csv_format(self, tmp_path):
        data = tmp_path / "d.csv"
        data.write_text("v\n1.5\n2.5\n4.0\n", encoding="utf-8")
        out = run_cli("bench", "--schemes", "rache", "--dataset", str(data),
                      "--column", "v", "--npivot", "8", "--repeat", "1",
                      "--format", "csv")
        assert out.returncode == 0, out.stderr
        assert out.stdout.startswith("scheme,n_pivot,messages")

    def test_failed_scheme_exits_two(self):
        # nPivot=4 cannot reach values near 1000: correctness failure
        out = run_cli("bench", "--schemes", "rache",
                      "--synthetic", "integers(900,1000):3",
                      "--npivot", "4", "--repeat", "1")
        assert out.returncode == 2

    def test_usage_errors_exit_one(self):
        assert run_cli("bench", "--schemes", "ckks").returncode == 1  # no workload
        assert run_cli("bench", "--nope").returncode == 1
        assert run_cli("frobnicate").returncode == 1
        assert run_cli("bench", "--synthetic", "uniform(0,1):3",
                       "--dataset", "x.csv", "--column", "v").returncode == 1

    def test_missing_dataset_exits_three(self):
        out = run_cli("bench", "--schemes", "ckks", "--dataset", "/absent.csv",
                      "--column", "v", "--repeat", "1")
        assert out.returncode == 3
