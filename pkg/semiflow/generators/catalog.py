"""
String identifiers for generator specs.

Grammar::

    bp:tau=<complex>,p=<herglotz>        disc, Berkson-Porta data
    hp:const:<complex>                   half-plane translation
    hp:sqrt                              half-plane square root
    hp:dirichlet:<key>=<value>,...       keys: file, c0, a<n>, tail=<A>:<beta>, sigma0
    pull-log:<disc id>                   logarithmic pullback of an elliptic tau = 0 spec
    pull-cayley:<disc id>                Cayley pullback of a disc spec

plus the aliases in ALIASES.
"""

import logging
import math
from typing import Dict, List

from ..cplane import parse_complex
from ..errors import UnknownGeneratorError
from .dirichlet import DirichletSeriesSpec, load_dirichlet_csv
from .herglotz import describe_herglotz, herglotz_by_name
from .specs import (
    BerksonPorta,
    ConstantGenerator,
    DirichletGenerator,
    GeneratorSpec,
    PullbackViaCayley,
    PullbackViaLog,
    SqrtGenerator,
)

logger = logging.getLogger(__name__)

ALIASES: Dict[str, str] = {
    "ex5.4": "bp:tau=1,p=recip",
    "ex4.8": "hp:sqrt",
}

PATTERNS: Dict[str, str] = {
    "bp:tau=<c>,p=<herglotz>": "disc generator (z - tau)(conj(tau) z - 1) p(z), |tau| <= 1",
    "hp:const:<c>": "half-plane translation H = c, Re c >= 0",
    "hp:sqrt": "half-plane H(w) = sqrt(w)",
    "hp:dirichlet:file=<csv>[,c0=<c>][,tail=<A>:<beta>][,sigma0=<s>]": "Dirichlet series from CSV",
    "hp:dirichlet:c0=<c>,a<n>=<c>,...": "inline Dirichlet series",
    "pull-log:<disc id>": "p(exp(-w)) for an elliptic disc spec with tau = 0",
    "pull-cayley:<disc id>": "Cayley pullback T'(z) H(z), z = (w - 1)/(w + 1)",
}


def _parse_dirichlet(options: str, identifier: str) -> DirichletGenerator:
    terms: Dict[int, complex] = {}
    c0 = None
    sigma0 = -math.inf
    tail = (0.0, 0.0)
    path = None
    for item in filter(None, options.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {item!r}")
        if key == "file":
            path = value
        elif key == "c0":
            c0 = parse_complex(value)
        elif key == "sigma0":
            sigma0 = float(value)
        elif key == "tail":
            amplitude, _, exponent = value.partition(":")
            tail = (float(amplitude), float(exponent))
        elif key.startswith("a") and key[1:].isdigit():
            terms[int(key[1:])] = parse_complex(value)
        else:
            raise ValueError(f"unknown Dirichlet option {key!r}")
    if path is not None:
        if terms:
            raise ValueError("file= and inline coefficients are exclusive")
        series = load_dirichlet_csv(path, c0=c0, sigma0=sigma0, tail=tail)
        return DirichletGenerator(series, label=identifier)
    series = DirichletSeriesSpec.from_terms(
        terms,
        c0=0j if c0 is None else c0,
        sigma0=sigma0,
        tail_amplitude=tail[0],
        tail_exponent=tail[1],
    )
    return DirichletGenerator(series)


def _disc_inner(identifier: str) -> BerksonPorta:
    inner = resolve(identifier)
    if not isinstance(inner, BerksonPorta):
        raise ValueError(f"{identifier!r} is not a disc generator")
    return inner


def resolve(identifier: str) -> GeneratorSpec:
    """
    Build the generator spec named by a catalog identifier.

    Example:
        >>> resolve("ex5.4").identifier()
        'bp:tau=1.0,p=recip'

    Raises:
        UnknownGeneratorError: If the identifier does not parse or names an invalid spec
    """
    logger.debug(f"resolve() entry - {identifier!r}")
    text = ALIASES.get(identifier.strip(), identifier.strip())
    try:
        if text.startswith("bp:"):
            body = text[3:]
            head, sep, fragment = body.partition(",p=")
            if not sep or not head.startswith("tau="):
                raise ValueError("expected bp:tau=<c>,p=<herglotz>")
            spec: GeneratorSpec = BerksonPorta(parse_complex(head[4:]), herglotz_by_name(fragment))
        elif text.startswith("hp:const:"):
            spec = ConstantGenerator(parse_complex(text[len("hp:const:") :]))
        elif text == "hp:sqrt":
            spec = SqrtGenerator()
        elif text.startswith("hp:dirichlet:"):
            spec = _parse_dirichlet(text[len("hp:dirichlet:") :], text)
        elif text.startswith("pull-log:"):
            spec = PullbackViaLog(_disc_inner(text[len("pull-log:") :]))
        elif text.startswith("pull-cayley:"):
            spec = PullbackViaCayley(_disc_inner(text[len("pull-cayley:") :]))
        else:
            raise UnknownGeneratorError(f"Unknown generator id {identifier!r}")
    except UnknownGeneratorError as e:
        if str(e).startswith("Unknown generator id"):
            raise
        raise UnknownGeneratorError(f"Unknown generator id {identifier!r}: {e}") from None
    except ValueError as e:
        raise UnknownGeneratorError(f"Unknown generator id {identifier!r}: {e}") from None
    logger.debug(f"resolve() exit - {spec.identifier()}")
    return spec


def list_catalog() -> List[Dict[str, str]]:
    """Identifier patterns, aliases and Herglotz entries with descriptions."""
    rows = [{"id": pattern, "description": text} for pattern, text in PATTERNS.items()]
    rows += [
        {"id": alias, "description": f"alias for {target}"} for alias, target in ALIASES.items()
    ]
    rows += [
        {"id": f"p={fragment}", "description": text}
        for fragment, text in describe_herglotz().items()
    ]
    return rows


__all__ = ["ALIASES", "PATTERNS", "resolve", "list_catalog"]
