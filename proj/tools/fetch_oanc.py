#!/usr/bin/env python3
"""Fetch the OANC sample tagged with Penn tags and convert it to the corpus format.

The sample ships with the Pattern3 source distribution on PyPI
(test/corpora/tagged-en-oanc.txt, one sentence per line, word/TAG tokens).
Its license allows personal use only, so the converted file stays out of
version control (data/external/ is ignored).

    python3 tools/fetch_oanc.py [--out data/external/oanc.tsv]
"""

import argparse
import pathlib
import subprocess
import sys
import tarfile
import tempfile

MEMBER = "test/corpora/tagged-en-oanc.txt"


def download(workdir: pathlib.Path) -> pathlib.Path:
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "--no-binary", ":all:",
         "--dest", str(workdir), "Pattern3==3.0.0"],
        check=True,
    )
    archives = sorted(workdir.glob("[Pp]attern3-*.tar.gz"))
    if not archives:
        sys.exit("fetch_oanc: no Pattern3 source archive downloaded")
    return archives[0]


def extract(archive: pathlib.Path) -> str:
    with tarfile.open(archive) as tar:
        for member in tar.getmembers():
            if member.name.endswith(MEMBER):
                return tar.extractfile(member).read().decode("utf-8")
    sys.exit(f"fetch_oanc: {MEMBER} not found in {archive.name}")


def convert(text: str) -> str:
    out = []
    for number, line in enumerate(text.splitlines(), 1):
        tokens = line.split()
        if not tokens:
            continue
        for token in tokens:
            word, slash, tag = token.rpartition("/")
            if not slash or not word or not tag:
                sys.exit(f"fetch_oanc: line {number}: malformed token {token!r}")
            out.append(f"{word}\t{tag.split('|')[0]}")
        out.append("")
    return "\n".join(out) + "\n"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data/external/oanc.tsv")
    parser.add_argument("--archive", help="use an already downloaded Pattern3 source archive")
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        archive = pathlib.Path(args.archive) if args.archive else download(pathlib.Path(tmp))
        corpus = convert(extract(archive))

    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(corpus, encoding="utf-8")
    sentences = corpus.count("\n\n")
    print(f"wrote {out} ({sentences} sentences)")


if __name__ == "__main__":
    main()
