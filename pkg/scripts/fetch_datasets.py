"""Fetch the UCI benchmark tables used by the demos and the acceptance suite.

Writes comma-separated files with a header row into ``data/``:

    voting.csv   Congressional Voting Records (label column ``class``)
    bcw.csv      Breast Cancer Wisconsin, original (label column ``class``)
    hdc.csv      Heart Disease, Cleveland (label column ``num``, 0/1)
    iris.csv     Iris (label column ``class``)

The UCI archive is tried first. When it is unreachable, the tables are taken
from the Orange3 3.3.9 source distribution on PyPI, which bundles copies of
the same files (BCW there has the 16 rows with missing values removed).

Usage::

    python scripts/fetch_datasets.py [--out data]
"""
import argparse
import csv
import io
import subprocess
import sys
import tarfile
import tempfile
import urllib.request
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases/"
ORANGE_SDIST = "orange3==3.3.9"

VOTING_COLUMNS = [
    "class", "handicapped_infants", "water_project_cost_sharing",
    "adoption_of_the_budget_resolution", "physician_fee_freeze",
    "el_salvador_aid", "religious_groups_in_schools",
    "anti_satellite_test_ban", "aid_to_nicaraguan_contras", "mx_missile",
    "immigration", "synfuels_corporation_cutback", "education_spending",
    "superfund_right_to_sue", "crime", "duty_free_exports",
    "export_administration_act_south_africa",
]
BCW_COLUMNS = [
    "clump_thickness", "uniformity_cell_size", "uniformity_cell_shape",
    "marginal_adhesion", "single_epithelial_cell_size", "bare_nuclei",
    "bland_chromatin", "normal_nucleoli", "mitoses", "class",
]
HDC_COLUMNS = [
    "age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach",
    "exang", "oldpeak", "slope", "ca", "thal", "num",
]
IRIS_COLUMNS = ["sepal_length", "sepal_width", "petal_length", "petal_width", "class"]

# Orange renders some Cleveland codes as words; map back to the UCI numeric codes.
HDC_CODES = {
    "sex": {"male": "1", "female": "0"},
    "cp": {"typical ang": "1", "atypical ang": "2", "non-anginal": "3", "asymptomatic": "4"},
    "restecg": {"normal": "0", "ST-T abnormal": "1", "left vent hypertrophy": "2"},
    "slope": {"upsloping": "1", "flat": "2", "downsloping": "3"},
    "thal": {"normal": "3", "fixed defect": "6", "reversable defect": "7"},
}


def _get(url):
    with urllib.request.urlopen(url, timeout=20) as response:
        return response.read().decode("utf-8")


def _write(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def from_uci(out):
    voting = [r for r in csv.reader(io.StringIO(_get(UCI + "voting-records/house-votes-84.data"))) if r]
    _write(out / "voting.csv", VOTING_COLUMNS, voting)
    bcw = [r[1:] for r in csv.reader(io.StringIO(_get(UCI + "breast-cancer-wisconsin/breast-cancer-wisconsin.data"))) if r]
    _write(out / "bcw.csv", BCW_COLUMNS, bcw)
    hdc = []
    for r in csv.reader(io.StringIO(_get(UCI + "heart-disease/processed.cleveland.data"))):
        if r:
            r[-1] = "0" if r[-1].strip() == "0" else "1"
            hdc.append(r)
    _write(out / "hdc.csv", HDC_COLUMNS, hdc)
    iris = [r for r in csv.reader(io.StringIO(_get(UCI + "iris/iris.data"))) if r]
    _write(out / "iris.csv", IRIS_COLUMNS, iris)


def _read_tab(tar, name):
    member = tar.extractfile(f"Orange3-3.3.9/Orange/datasets/{name}")
    lines = member.read().decode("utf-8").splitlines()
    # three header lines: names, types, flags
    return [line.split("\t") for line in lines[3:] if line.strip()]


def from_orange(out):
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", ORANGE_SDIST, "--no-deps",
             "--no-binary", ":all:", "-d", tmp],
            check=True, stdout=subprocess.DEVNULL,
        )
        sdist = next(Path(tmp).glob("*.tar.gz"))
        with tarfile.open(sdist) as tar:
            voting = [[c if c else "?" for c in r] for r in _read_tab(tar, "voting.tab")]
            _write(out / "voting.csv", VOTING_COLUMNS, voting)
            _write(out / "bcw.csv", BCW_COLUMNS, _read_tab(tar, "breast-cancer-wisconsin.tab"))
            hdc = []
            for r in _read_tab(tar, "heart_disease.tab"):
                row = []
                for name, cell in zip(HDC_COLUMNS, r):
                    cell = cell.strip()
                    row.append(HDC_CODES.get(name, {}).get(cell, cell) if cell else "?")
                hdc.append(row)
            _write(out / "hdc.csv", HDC_COLUMNS, hdc)
            _write(out / "iris.csv", IRIS_COLUMNS, _read_tab(tar, "iris.tab"))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "data"))
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        from_uci(out)
    except OSError as exc:
        print(f"UCI archive unreachable ({exc}); using the Orange3 sdist copies", file=sys.stderr)
        from_orange(out)


if __name__ == "__main__":
    main()
