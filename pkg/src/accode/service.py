"""HTTP facade over the codec, the benchmark lab, and the bound evaluators.

Stateless JSON-in/JSON-out endpoints; compressed payloads travel base64.
Domain violations map to 422, undecodable payloads to 400.
"""

import base64
import binascii

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from accode import __version__
from accode.bounds import (
    asymptote_curve,
    entropy_curve,
    max_moment_curve,
    power_law_curve,
)
from accode.codec import decode_with_info, encode_with_trace
from accode.errors import DomainError, MalformedStream, MembershipError
from accode.lab import (
    MAXIMA_COLUMNS,
    REDUNDANCY_COLUMNS,
    ExperimentConfig,
    run_max_experiment,
    run_redundancy,
)
from accode.sources import EnvelopeSpec, Explicit, SourceDist, parse_source_spec

app = FastAPI(title="accode", version=__version__)


@app.exception_handler(DomainError)
@app.exception_handler(MembershipError)
async def _domain_error(request: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(MalformedStream)
async def _malformed(request: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


class EncodeRequest(BaseModel):
    symbols: list[int]


class EncodeResponse(BaseModel):
    data_b64: str
    byte_length: int
    bit_length: int
    c1_bits: int
    c2_bits: int
    escapes: int


class DecodeRequest(BaseModel):
    data_b64: str
    max_symbols: int | None = Field(default=None, ge=0)


class DecodeResponse(BaseModel):
    symbols: list[int]
    consumed_bits: int
    trailing_bytes: int


class BenchRequest(BaseModel):
    alpha: float
    C: float
    source: str
    explicit_probs: list[float] | None = None
    n_list: list[int]
    trials: int = Field(default=100, ge=1)
    seed: int = 0


class TableResponse(BaseModel):
    columns: list[str]
    rows: list[list]


class EntropyBoundsRequest(BaseModel):
    alpha: float
    C: float
    eps_list: list[float]


class AsymptoteRequest(BaseModel):
    alpha: float
    n_list: list[int]


class PowerLawRequest(BaseModel):
    alpha: float
    C: float
    n_list: list[int]


class MaxMomentRequest(BaseModel):
    alpha: float
    C: float
    n_list: list[int]


def _resolve_source(spec: str, explicit_probs: list[float] | None) -> SourceDist:
    if spec.split(":", 1)[0] == "explicit" and explicit_probs is not None:
        return Explicit(explicit_probs)
    return parse_source_spec(spec)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/encode", response_model=EncodeResponse)
def encode(req: EncodeRequest) -> EncodeResponse:
    data, trace = encode_with_trace(req.symbols)
    return EncodeResponse(
        data_b64=base64.b64encode(data).decode("ascii"),
        byte_length=len(data),
        bit_length=trace.c1_bits + trace.c2_bits,
        c1_bits=trace.c1_bits,
        c2_bits=trace.c2_bits,
        escapes=trace.escapes,
    )


@app.post("/decode", response_model=DecodeResponse)
def decode(req: DecodeRequest) -> DecodeResponse:
    try:
        data = base64.b64decode(req.data_b64, validate=True)
    except binascii.Error as exc:
        raise MalformedStream(f"payload is not valid base64: {exc}") from None
    symbols, consumed = decode_with_info(data, max_symbols=req.max_symbols)
    return DecodeResponse(
        symbols=symbols,
        consumed_bits=consumed,
        trailing_bytes=len(data) - (consumed + 7) // 8,
    )


@app.post("/bench/redundancy", response_model=TableResponse)
def bench_redundancy(req: BenchRequest) -> TableResponse:
    config = ExperimentConfig(
        envelope=EnvelopeSpec(req.C, req.alpha),
        source=_resolve_source(req.source, req.explicit_probs),
        n_list=req.n_list,
        trials=req.trials,
        seed=req.seed,
    )
    return TableResponse(columns=REDUNDANCY_COLUMNS, rows=run_redundancy(config).csv_rows())


@app.post("/bench/maxima", response_model=TableResponse)
def bench_maxima(req: BenchRequest) -> TableResponse:
    config = ExperimentConfig(
        envelope=EnvelopeSpec(req.C, req.alpha),
        source=_resolve_source(req.source, req.explicit_probs),
        n_list=req.n_list,
        trials=req.trials,
        seed=req.seed,
    )
    return TableResponse(columns=MAXIMA_COLUMNS, rows=run_max_experiment(config).csv_rows())


def _curve_table(curve, lead: list[tuple[str, float]]) -> TableResponse:
    columns = [name for name, _ in lead] + [curve.param_name] + list(curve.values.keys())
    rows = []
    for idx, g in enumerate(curve.grid):
        row = [value for _, value in lead] + [g]
        row.extend(column[idx] for column in curve.values.values())
        rows.append(row)
    return TableResponse(columns=columns, rows=rows)


@app.post("/bounds/entropy", response_model=TableResponse)
def bounds_entropy(req: EntropyBoundsRequest) -> TableResponse:
    env = EnvelopeSpec(req.C, req.alpha)
    curve = entropy_curve(env, req.eps_list)
    return _curve_table(curve, [("alpha", req.alpha), ("C", req.C)])


@app.post("/bounds/redundancy", response_model=TableResponse)
def bounds_redundancy(req: AsymptoteRequest) -> TableResponse:
    if req.alpha <= 0:
        raise DomainError(f"alpha must be positive, got {req.alpha}")
    curve = asymptote_curve(req.alpha, req.n_list)
    return _curve_table(curve, [("alpha", req.alpha)])


@app.post("/bounds/powerlaw", response_model=TableResponse)
def bounds_powerlaw(req: PowerLawRequest) -> TableResponse:
    curve = power_law_curve(req.C, req.alpha, req.n_list)
    return _curve_table(curve, [("alpha", req.alpha), ("C", req.C)])


@app.post("/bounds/maxmoment", response_model=TableResponse)
def bounds_maxmoment(req: MaxMomentRequest) -> TableResponse:
    env = EnvelopeSpec(req.C, req.alpha)
    curve = max_moment_curve(env, req.n_list)
    return _curve_table(curve, [("alpha", req.alpha), ("C", req.C)])
