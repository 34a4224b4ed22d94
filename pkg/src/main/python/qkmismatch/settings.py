"""Camada de configuração do pacote.

Os valores padrão ficam em ``src/main/resources/base/settings.json``. Um
arquivo do usuário pode sobrescrever qualquer chave conhecida; chaves
desconhecidas são rejeitadas para evitar erros de digitação silenciosos.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

import dataclasses

from .common import SettingsError, toFraction

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS_PATH = Path(__file__).resolve().parents[2] / "resources" / "base" / "settings.json"


@dataclasses.dataclass(frozen=True)
class QSearchSettings:
    """Constantes do agendamento exponencial de QSearch'."""

    c: Fraction = Fraction(6, 5)  # razão do agendamento, 1 < c < 2
    C: int = 12  # número mínimo de rodadas
    alphaQ: float = 8.0  # constante α da análise de amplificação


@dataclasses.dataclass(frozen=True)
class BoostSettings:
    constant: int = 18  # r >= constant·λ·ln N (limite de Hoeffding)
    minLambda: int = 4


@dataclasses.dataclass(frozen=True)
class CountSettings:
    confidence: int = 6  # parâmetro de confiança da contagem, 1 - 1/(2(6-1)) = 9/10


@dataclasses.dataclass(frozen=True)
class BackendSettings:
    kind: str = "analytic"
    qubitCap: int = 24


@dataclasses.dataclass(frozen=True)
class TrialSettings:
    workers: int = 1
    confidence: float = 0.99


@dataclasses.dataclass(frozen=True)
class Settings:
    qsearch: QSearchSettings = dataclasses.field(default_factory=QSearchSettings)
    boost: BoostSettings = dataclasses.field(default_factory=BoostSettings)
    count: CountSettings = dataclasses.field(default_factory=CountSettings)
    backend: BackendSettings = dataclasses.field(default_factory=BackendSettings)
    trials: TrialSettings = dataclasses.field(default_factory=TrialSettings)


_SECTIONS = {
    "qsearch": QSearchSettings,
    "boost": BoostSettings,
    "count": CountSettings,
    "backend": BackendSettings,
    "trials": TrialSettings,
}


def _readJson(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r") as settingsFile:
            content = json.load(settingsFile)
    except (OSError, json.JSONDecodeError) as error:
        raise SettingsError(f"não foi possível ler {path}: {error}") from error

    if not isinstance(content, dict):
        raise SettingsError(f"{path} deve conter um objeto JSON")
    return content


def _merge(base: Dict[str, Any], override: Dict[str, Any], origin: Path) -> Dict[str, Any]:
    merged = {name: dict(values) for name, values in base.items()}
    for section, values in override.items():
        if section not in _SECTIONS:
            raise SettingsError(f"seção desconhecida '{section}' em {origin}")
        if not isinstance(values, dict):
            raise SettingsError(f"a seção '{section}' em {origin} deve ser um objeto")
        known = {f.name for f in dataclasses.fields(_SECTIONS[section])}
        for key, value in values.items():
            if key not in known:
                raise SettingsError(f"chave desconhecida '{section}.{key}' em {origin}")
            merged.setdefault(section, {})[key] = value
    return merged


def _build(raw: Dict[str, Any]) -> Settings:
    sections = {}
    for name, sectionType in _SECTIONS.items():
        values = dict(raw.get(name, {}))
        if name == "qsearch" and "c" in values:
            values["c"] = toFraction(values["c"])
        try:
            sections[name] = sectionType(**values)
        except TypeError as error:
            raise SettingsError(f"seção '{name}' inválida: {error}") from error
    return Settings(**sections)


def loadSettings(path: Optional[Path] = None) -> Settings:
    """Carrega os padrões e aplica, se houver, o arquivo ``path`` por cima."""

    raw = _merge({}, _readJson(DEFAULT_SETTINGS_PATH), DEFAULT_SETTINGS_PATH)

    if path is not None:
        path = Path(path)
        logger.debug("Aplicando configurações de %s", path)
        raw = _merge(raw, _readJson(path), path)

    return _build(raw)
