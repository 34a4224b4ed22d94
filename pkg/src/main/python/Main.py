"""
Main.py

Ponto de entrada da linha de comando.

Subcomandos: ``match`` (casamento aproximado), ``decide`` (decisor de Hamming),
``count`` (histograma da contagem quântica), ``gen`` (instâncias plantadas) e
``bench`` (varredura de custo). Código de saída 0 quando roda; 2 para
entradas inválidas. A flag do casamento é dado, não código de saída.
"""

import argparse
import json
import logging
import sys
from collections import Counter
from pathlib import Path
from typing import List, Optional, Sequence

from dataclasses import replace

import numpy as np

from qkmismatch.common import (
    QueryCounter,
    RngSeed,
    StateTooLarge,
    ValidationError,
    deriveStream,
    isPowerOfTwo,
    validateInstance,
)
from qkmismatch.matching.instances import (
    InfeasiblePlant,
    generateInstance,
    parsePlant,
    saveInstanceFiles,
)
from qkmismatch.matching.trials import (
    TrialAggregate,
    TrialKind,
    TrialReport,
    TrialSpec,
    benchSweep,
    parseGrid,
    runTrials,
    writeBenchCsv,
)
from qkmismatch.quantum.backend import BackendHandle, BackendKind
from qkmismatch.reference import countingErrorBound
from qkmismatch.settings import Settings, loadSettings

logger = logging.getLogger("qkmismatch")

EXIT_OK = 0
EXIT_INVALID = 2


def _readBytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as error:
        raise ValidationError(f"não foi possível ler {path}: {error}") from error


def _backend(args: argparse.Namespace, settings: Settings) -> BackendHandle:
    backend = BackendHandle.fromSettings(settings.backend, RngSeed(args.seed))
    if args.backend:
        backend = replace(backend, kind=BackendKind(args.backend))
    return backend


def _workers(args: argparse.Namespace, settings: Settings) -> int:
    return args.workers if args.workers is not None else settings.trials.workers


def _printTrials(reports: Sequence[TrialReport], result: TrialAggregate) -> None:
    for report in reports:
        print(report.dumps())
    print(json.dumps({"aggregate": result.toJson()}, sort_keys=True))


def runMatch(args: argparse.Namespace, settings: Settings) -> int:
    inst = validateInstance(_readBytes(args.text), _readBytes(args.pattern), args.k, args.eps)
    spec = TrialSpec(TrialKind.MATCH, inst, _backend(args, settings), settings)
    reports, result = runTrials(spec, args.trials, RngSeed(args.seed), _workers(args, settings), settings.trials.confidence)
    _printTrials(reports, result)
    return EXIT_OK


def runDecide(args: argparse.Namespace, settings: Settings) -> int:
    x, y = _readBytes(args.x), _readBytes(args.y)
    # O decisor exige |X| = |Y|; a instância só empacota os dois lados
    if len(x) != len(y):
        raise ValidationError(f"|X| = {len(x)} e |Y| = {len(y)} diferem")
    inst = validateInstance(x, y, args.k, args.eps)
    spec = TrialSpec(TrialKind.DECIDE, inst, _backend(args, settings), settings)
    reports, result = runTrials(spec, args.trials, RngSeed(args.seed), _workers(args, settings), settings.trials.confidence)
    _printTrials(reports, result)
    return EXIT_OK


def runCount(args: argparse.Namespace, settings: Settings) -> int:
    backend = _backend(args, settings)
    if args.n < 1:
        raise ValidationError(f"N = {args.n} deve ser pelo menos 1")
    if not (0 <= args.t <= args.n):
        raise ValidationError(f"t = {args.t} fora de [0, {args.n}]")
    if args.m_param < 2:
        raise ValidationError(f"M = {args.m_param} deve ser pelo menos 2")
    if backend.kind is BackendKind.EXACT and not isPowerOfTwo(args.n):
        raise ValidationError(f"o backend exato exige N potência de dois, recebido {args.n}")

    marked = np.arange(args.n) < args.t
    rounds = backend.countingRounds(args.m_param)
    bound = countingErrorBound(args.n, args.t, rounds, settings.count.confidence)

    histogram: Counter = Counter()
    within = 0
    for index in range(args.trials):
        rng = deriveStream(RngSeed(args.seed), index).generator()
        estimate = backend.countSample(marked, args.m_param, rng, QueryCounter())
        histogram[f"{estimate.tPrime:.6f}"] += 1
        within += abs(estimate.tPrime - args.t) <= bound

    print(json.dumps({
        "n": args.n,
        "t": args.t,
        "M": args.m_param,
        "rounds": rounds,
        "trials": args.trials,
        "backend": backend.kind.value,
        "error_bound": bound,
        "within_bound": within / args.trials,
        "histogram": dict(sorted(histogram.items(), key=lambda item: float(item[0]))),
    }, sort_keys=True))
    return EXIT_OK


def runGen(args: argparse.Namespace, settings: Settings) -> int:
    planted = generateInstance(args.n, args.m, args.k, args.eps, parsePlant(args.plant), RngSeed(args.seed))
    if isinstance(planted, InfeasiblePlant):
        logger.error("Plantio inviável: %s", planted.reason)
        return EXIT_INVALID

    saveInstanceFiles(planted, Path(args.out))
    print(json.dumps(planted.sidecar(), sort_keys=True))
    return EXIT_OK


def runBench(args: argparse.Namespace, settings: Settings) -> int:
    rows = benchSweep(
        parseGrid(args.grid), args.trials, _backend(args, settings), RngSeed(args.seed), settings, _workers(args, settings)
    )
    writeBenchCsv(rows, Path(args.out))
    logger.info("Tabela gravada em %s", args.out)
    return EXIT_OK


def _addCommon(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--backend", choices=[kind.value for kind in BackendKind], default=None)
    parser.add_argument("--seed", type=int, default=0, help="semente mestre de 64 bits")
    parser.add_argument("--trials", type=int, default=1)
    parser.add_argument("--workers", type=int, default=None)


def parseArgs(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="qkmismatch", description="Busca aproximada com k diferenças simulada.")
    parser.add_argument("--settings", type=Path, default=None, help="arquivo JSON com configurações")
    parser.add_argument("--verbose", action="store_true")
    subparsers = parser.add_subparsers(dest="command", required=True)

    match = subparsers.add_parser("match", help="casamento aproximado")
    match.add_argument("--text", required=True)
    match.add_argument("--pattern", required=True)
    match.add_argument("-k", type=int, required=True)
    match.add_argument("--eps", required=True)
    _addCommon(match)
    match.set_defaults(handler=runMatch)

    decide = subparsers.add_parser("decide", help="decisor de Hamming")
    decide.add_argument("--x", required=True)
    decide.add_argument("--y", required=True)
    decide.add_argument("-k", type=int, required=True)
    decide.add_argument("--eps", required=True)
    _addCommon(decide)
    decide.set_defaults(handler=runDecide)

    count = subparsers.add_parser("count", help="histograma da contagem quântica")
    count.add_argument("--n", type=int, required=True)
    count.add_argument("--t", type=int, required=True)
    count.add_argument("--m-param", type=int, required=True)
    _addCommon(count)
    count.set_defaults(handler=runCount)

    gen = subparsers.add_parser("gen", help="gera uma instância plantada")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("-k", type=int, required=True)
    gen.add_argument("--eps", required=True)
    gen.add_argument("--plant", required=True, help="match-at-distance-d@j ou none-above-distance-d")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(handler=runGen)

    bench = subparsers.add_parser("bench", help="varredura de custo")
    bench.add_argument("--grid", required=True, help='por exemplo "n=1024;m=256;k=4,16,64;eps=1"')
    bench.add_argument("--out", required=True)
    _addCommon(bench)
    bench.set_defaults(handler=runBench)

    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = parseArgs(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        settings = loadSettings(args.settings)
        if getattr(args, "trials", 1) < 1:
            raise ValidationError(f"--trials deve ser positivo, recebido {args.trials}")
        return int(args.handler(args, settings))
    except (ValidationError, StateTooLarge) as error:
        logger.error("%s", error)
        return EXIT_INVALID


if __name__ == '__main__':
    sys.exit(main())
