"""Thin command-line client for the accode service.

All work happens behind the HTTP API: by default commands mount the service
in-process, `--server` points them at a running instance instead.  File
parsing and formatting stay on the client side, so `explicit:FILE` sources
and text/varint payloads never require server-side filesystem access.

Exit codes: 0 success, 1 I/O or transport failure, 2 validation/format error.
"""

import csv
import io
import sys

import click
import httpx

from accode.errors import DomainError, MalformedStream


class _ClientError(Exception):
    """Validation-grade failure (exit 2)."""


class _IoError(Exception):
    """I/O or transport failure (exit 1)."""


# ---------------------------------------------------------------- payloads

def parse_text(data: bytes) -> list[int]:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise _ClientError(f"input is not UTF-8 text: {exc}") from None
    symbols = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            value = int(line)
        except ValueError:
            raise _ClientError(f"line {lineno}: {line!r} is not an integer") from None
        if value < 1:
            raise _ClientError(f"line {lineno}: symbol must be >= 1, got {value}")
        symbols.append(value)
    return symbols


def format_text(symbols: list[int]) -> bytes:
    if not symbols:
        return b""
    return ("\n".join(str(s) for s in symbols) + "\n").encode("ascii")


def parse_varint(data: bytes) -> list[int]:
    symbols = []
    value = 0
    shift = 0
    start = 0
    for offset, byte in enumerate(data):
        if shift == 0:
            start = offset
        if shift > 63:
            raise _ClientError(f"offset {start}: varint wider than 64 bits")
        value |= (byte & 0x7F) << shift
        if byte & 0x80:
            shift += 7
            continue
        if value < 1:
            raise _ClientError(f"offset {start}: symbol must be >= 1, got {value}")
        symbols.append(value)
        value = 0
        shift = 0
    if shift:
        raise _ClientError(f"offset {start}: truncated varint at end of input")
    return symbols


def format_varint(symbols: list[int]) -> bytes:
    out = bytearray()
    for value in symbols:
        while True:
            group = value & 0x7F
            value >>= 7
            out.append(group | 0x80 if value else group)
            if not value:
                break
    return bytes(out)


_PARSERS = {"text": parse_text, "varint": parse_varint}
_FORMATTERS = {"text": format_text, "varint": format_varint}


# ---------------------------------------------------------------- transport

def _open_client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        # starlette's sync-over-ASGI client warns about its own httpx pin
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

        from accode.service import app

        return TestClient(app, raise_server_exceptions=False)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    try:
        resp = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        raise _IoError(f"request to {path} failed: {exc}") from None
    if resp.status_code >= 500:
        raise _IoError(f"{path}: server error {resp.status_code}")
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail")
        except ValueError:
            detail = resp.text
        raise _ClientError(f"{path}: {detail}")
    return resp.json()


# ---------------------------------------------------------------- file I/O

def _read_file(path: str) -> bytes:
    try:
        if path == "-":
            return sys.stdin.buffer.read()
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise _IoError(f"cannot read {path}: {exc}") from None


def _write_file(path: str, data: bytes) -> None:
    try:
        if path == "-":
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
            return
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise _IoError(f"cannot write {path}: {exc}") from None


def _write_table(path: str, columns: list[str], rows: list[list]) -> None:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    _write_file(path, out.getvalue().encode("utf-8"))


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise _ClientError(f"{flag}: {exc}") from None


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise _ClientError(f"{flag}: {exc}") from None


def _source_payload(spec: str) -> dict:
    kind, _, rest = spec.partition(":")
    if kind == "explicit":
        try:
            with open(rest, "r", encoding="utf-8") as fh:
                probs = [float(line) for line in fh if line.strip()]
        except OSError as exc:
            raise _IoError(f"cannot read {rest}: {exc}") from None
        except ValueError as exc:
            raise _ClientError(f"{rest}: {exc}") from None
        return {"source": "explicit", "explicit_probs": probs}
    return {"source": spec, "explicit_probs": None}


def _run(action) -> None:
    try:
        action()
    except _ClientError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except (DomainError, MalformedStream) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except _IoError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    sys.exit(0)


# ---------------------------------------------------------------- commands

_server_option = click.option("--server", default=None, metavar="URL",
                              help="Remote service URL; default runs in-process.")
_format_option = click.option("--format", "fmt", type=click.Choice(["text", "varint"]),
                              default="text", show_default=True,
                              help="Plaintext payload layout.")


@click.group()
def main() -> None:
    """Lossless coding of positive-integer sequences, plus bounds and benchmarks."""


@main.command()
@click.option("--in", "in_path", required=True, metavar="PATH")
@click.option("--out", "out_path", required=True, metavar="PATH")
@_format_option
@_server_option
def encode(in_path: str, out_path: str, fmt: str, server: str | None) -> None:
    """Compress a file of positive integers into a codec stream."""

    def action() -> None:
        symbols = _PARSERS[fmt](_read_file(in_path))
        with _open_client(server) as client:
            reply = _post(client, "/encode", {"symbols": symbols})
        import base64

        _write_file(out_path, base64.b64decode(reply["data_b64"]))

    _run(action)


@main.command()
@click.option("--in", "in_path", required=True, metavar="PATH")
@click.option("--out", "out_path", required=True, metavar="PATH")
@_format_option
@_server_option
def decode(in_path: str, out_path: str, fmt: str, server: str | None) -> None:
    """Expand a codec stream back into integers; trailing bytes only warn."""

    def action() -> None:
        import base64

        data = _read_file(in_path)
        with _open_client(server) as client:
            reply = _post(client, "/decode",
                          {"data_b64": base64.b64encode(data).decode("ascii")})
        if reply["trailing_bytes"] > 0:
            click.echo(
                f"warning: ignoring {reply['trailing_bytes']} trailing byte(s) "
                "after the codeword", err=True)
        _write_file(out_path, _FORMATTERS[fmt](reply["symbols"]))

    _run(action)


@main.command()
@click.option("--alpha", type=float, required=True)
@click.option("--C", "big_c", type=float, required=True)
@click.option("--source", required=True, metavar="SPEC",
              help="geom:q=Q | point:k=K | explicit:FILE")
@click.option("--n-list", "n_list", required=True, metavar="CSV")
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", required=True, metavar="PATH")
@click.option("--experiment", type=click.Choice(["redundancy", "maxima"]),
              default="redundancy", show_default=True)
@_server_option
def bench(alpha: float, big_c: float, source: str, n_list: str, trials: int,
          seed: int, out_path: str, experiment: str, server: str | None) -> None:
    """Monte-Carlo redundancy (or running-maximum) measurements as CSV."""

    def action() -> None:
        payload = {
            "alpha": alpha, "C": big_c,
            "n_list": _parse_int_list(n_list, "--n-list"),
            "trials": trials, "seed": seed,
        }
        payload.update(_source_payload(source))
        with _open_client(server) as client:
            reply = _post(client, f"/bench/{experiment}", payload)
        _write_table(out_path, reply["columns"], reply["rows"])

    _run(action)


@main.group()
def bounds() -> None:
    """Evaluate the closed-form bound curves as CSV."""


@bounds.command("entropy")
@click.option("--alpha", type=float, required=True)
@click.option("--C", "big_c", type=float, required=True)
@click.option("--eps-list", "eps_list", default="1e-1,1e-2,1e-3,1e-4,1e-5,1e-6",
              show_default=True, metavar="CSV")
@click.option("--out", "out_path", default="-", show_default=True, metavar="PATH")
@_server_option
def bounds_entropy(alpha: float, big_c: float, eps_list: str, out_path: str,
                   server: str | None) -> None:
    """Metric-entropy bracket (nats) of the envelope parameter set."""

    def action() -> None:
        payload = {"alpha": alpha, "C": big_c,
                   "eps_list": _parse_float_list(eps_list, "--eps-list")}
        with _open_client(server) as client:
            reply = _post(client, "/bounds/entropy", payload)
        _write_table(out_path, reply["columns"], reply["rows"])

    _run(action)


@bounds.command("redundancy")
@click.option("--alpha", type=float, required=True)
@click.option("--n", "single_n", type=int, default=None)
@click.option("--n-list", "n_list", default=None, metavar="CSV")
@click.option("--out", "out_path", default="-", show_default=True, metavar="PATH")
@_server_option
def bounds_redundancy(alpha: float, single_n: int | None, n_list: str | None,
                      out_path: str, server: str | None) -> None:
    """Leading-order minimax redundancy (bits) per message length."""

    def action() -> None:
        if single_n is None and n_list is None:
            raise _ClientError("provide --n or --n-list")
        ns = _parse_int_list(n_list, "--n-list") if n_list else []
        if single_n is not None:
            ns.append(single_n)
        with _open_client(server) as client:
            reply = _post(client, "/bounds/redundancy",
                          {"alpha": alpha, "n_list": sorted(set(ns))})
        _write_table(out_path, reply["columns"], reply["rows"])

    _run(action)


@bounds.command("powerlaw")
@click.option("--alpha", type=float, required=True)
@click.option("--C", "big_c", type=float, required=True)
@click.option("--n-list", "n_list", required=True, metavar="CSV")
@click.option("--out", "out_path", default="-", show_default=True, metavar="PATH")
@_server_option
def bounds_powerlaw(alpha: float, big_c: float, n_list: str, out_path: str,
                    server: str | None) -> None:
    """Redundancy bracket (bits) for power-law envelopes."""

    def action() -> None:
        payload = {"alpha": alpha, "C": big_c,
                   "n_list": _parse_int_list(n_list, "--n-list")}
        with _open_client(server) as client:
            reply = _post(client, "/bounds/powerlaw", payload)
        _write_table(out_path, reply["columns"], reply["rows"])

    _run(action)


@bounds.command("maxmoment")
@click.option("--alpha", type=float, required=True)
@click.option("--C", "big_c", type=float, required=True)
@click.option("--n-list", "n_list", required=True, metavar="CSV")
@click.option("--out", "out_path", default="-", show_default=True, metavar="PATH")
@_server_option
def bounds_maxmoment(alpha: float, big_c: float, n_list: str, out_path: str,
                     server: str | None) -> None:
    """Closed-form bound (per length) on the expected running maximum."""

    def action() -> None:
        payload = {"alpha": alpha, "C": big_c,
                   "n_list": _parse_int_list(n_list, "--n-list")}
        with _open_client(server) as client:
            reply = _post(client, "/bounds/maxmoment", payload)
        _write_table(out_path, reply["columns"], reply["rows"])

    _run(action)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from accode.service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
