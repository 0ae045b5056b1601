"""
Command-line interface for wiresafe.
"""

import json
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np
import typer
from rich import print
from rich.console import Console
from rich.table import Table
from typing_extensions import Annotated

from . import __version__
from ._constants import BUDGET_ENV_VAR_NAME, EXIT_INSECURE, EXIT_OK, EXIT_USAGE
from ._context import override_budget
from .audit import SecrecyReport, audit_network, audit_wiretap_channel
from .bench import bench_grid, bench_mul, fit_cost_model
from .coset import CosetScheme, build_mds_baseline, clear_scheme, decode, encode
from .exceptions import InfeasibleSinkError
from .gf import ExtVector, FieldSpec
from .netsim import assign_random_code, edge_payloads, is_feasible, load_network, mincut, sink_decode, transmit
from .netsim import wiretap_matrix as build_wiretap_matrix
from .rankmetric import GabidulinCode, build_gabidulin

err_console = Console(stderr=True)

app = typer.Typer(name="wiresafe", add_completion=True, no_args_is_help=True, rich_markup_mode="markdown")

SCHEMES = ("gabidulin", "clear", "mds")


@dataclass
class RunConfig:
    """Parameters shared by the subcommands.

    Exactly one of `k` and `mu` may be omitted; if both are given they must sum to `n`.
    """

    command: str
    m: int = 3
    modulus: str = ""
    n: int = 3
    k: Optional[int] = None
    mu: Optional[int] = None
    graph: Optional[str] = None
    seed: int = 0
    budget: Optional[int] = None
    joint_budget: Optional[int] = None
    wiretap_set_budget: Optional[int] = None
    out: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"--n must be positive, got {self.n}")
        if self.k is not None and self.mu is not None and self.k + self.mu != self.n:
            raise ValueError(f"--k {self.k} and --mu {self.mu} must add up to --n {self.n}")
        for flag, value in (
            ("--budget", self.budget),
            ("--joint-budget", self.joint_budget),
            ("--wiretap-set-budget", self.wiretap_set_budget),
        ):
            if value is not None and value < 1:
                raise ValueError(f"{flag} must be positive, got {value}")

    @property
    def field(self) -> FieldSpec:
        if self.modulus:
            return FieldSpec(self.m, int(self.modulus.removeprefix("0x"), 16))
        return FieldSpec.default(self.m)

    def split(self, default_mu: int) -> Tuple[int, int]:
        """(k, mu) with the missing one derived from n."""
        if self.k is not None:
            k = self.k
        elif self.mu is not None:
            k = self.n - self.mu
        else:
            k = self.n - default_mu
        if not 0 <= k <= self.n:
            raise ValueError(f"k must be between 0 and n={self.n}, got {k}")
        return k, self.n - k


def version_callback(value: bool) -> None:
    """Show version and exit."""
    if value:
        print(f"wiresafe {__version__}")
        raise typer.Exit(EXIT_OK)


@contextmanager
def _handle_errors() -> Iterator[None]:
    try:
        yield
    except typer.Exit:
        raise
    except KeyboardInterrupt:
        err_console.print("\n⚠️ Operation cancelled by user")
        raise typer.Exit(EXIT_USAGE)
    except Exception as e:
        err_console.print(f"❌ [red]ERROR:[/red] {str(e)}")
        raise typer.Exit(EXIT_USAGE)


def _emit(payload: Dict[str, Any], out: Optional[Path] = None) -> None:
    text = json.dumps(payload, indent=2)
    if out is not None:
        out.write_text(text + "\n")
    typer.echo(text)


def _load_scheme(code_path: Path) -> CosetScheme:
    return CosetScheme(GabidulinCode.from_dict(json.loads(code_path.read_text())))


def _build_scheme(name: str, field: FieldSpec, n: int, k: int) -> CosetScheme:
    if name == "gabidulin":
        return CosetScheme(build_gabidulin(field, n, k))
    if name == "clear":
        return clear_scheme(field, n, k)
    if name == "mds":
        return build_mds_baseline(field, n, n - k)
    raise ValueError(f"Unsupported scheme: {name}. Use one of {', '.join(SCHEMES)}.")


def _read_lines() -> Iterator[Tuple[int, str]]:
    for number, line in enumerate(sys.stdin, start=1):
        if line.strip():
            yield number, line


def _parse_vector(field: FieldSpec, line: str, length: int, what: str) -> ExtVector:
    values = json.loads(line)
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        raise ValueError(f"{what} must be a JSON array of hex strings")
    if len(values) != length:
        raise ValueError(f"{what} must have {length} symbols, got {len(values)}")
    return ExtVector.from_hex(field, values)


@app.callback(invoke_without_command=True)
def main(
    version: Annotated[
        bool, typer.Option("--version", callback=version_callback, is_eager=True, help="Show version and exit.")
    ] = False,
) -> None:
    """
    🔐 Universal secure network coding with rank-metric codes.

    Build Gabidulin coset schemes, push them through simulated networks and audit their secrecy
    exactly. Set the environment variable `WIRESAFE_BUDGET` to change the default enumeration
    budget.
    """
    pass


@app.command("construct")
def construct(
    m: Annotated[int, typer.Option("--m", help="Extension degree of GF(2^m).")] = 3,
    modulus: Annotated[str, typer.Option(help="Irreducible modulus as hex; default from the built-in table.")] = "",
    n: Annotated[int, typer.Option("--n", help="Code length (n <= m).")] = 3,
    mu: Annotated[Optional[int], typer.Option("--mu", help="Wiretapper strength; the code dimension.")] = None,
    k: Annotated[Optional[int], typer.Option("--k", help="Message length, k = n - mu.")] = None,
    generators: Annotated[str, typer.Option(help="Comma-separated hex generators; default 1, α, α², ...")] = "",
    out: Annotated[Optional[Path], typer.Option(help="Write the code JSON to this file.")] = None,
) -> None:
    """
    🧱 Construct a Gabidulin code and print it as JSON.

    Examples:

    * The default GF(2³) code with H = [1 α α²]:
    ```
    $ wiresafe construct --out code.json
    ```

    * Custom generators:
    ```
    $ wiresafe construct --m 4 --n 3 --k 1 --generators 1,3,4
    ```
    """
    with _handle_errors():
        config = RunConfig("construct", m=m, modulus=modulus, n=n, k=k, mu=mu, out=out)
        k_, _ = config.split(default_mu=2)
        chosen = [int(g, 16) for g in generators.split(",")] if generators else None
        code = build_gabidulin(config.field, n, k_, chosen)
        payload = code.to_dict()
        if config.out is not None:
            config.out.write_text(json.dumps(payload, indent=2) + "\n")
        payload["H"] = code.H.to_hex()
        payload["designed_distance"] = code.designed_distance
        typer.echo(json.dumps(payload, indent=2))


@app.command("encode")
def encode_command(
    code: Annotated[Path, typer.Option(help="Code file written by `wiresafe construct --out`.")],
    seed: Annotated[int, typer.Option(help="Seed of the randomness generator.")] = 0,
) -> None:
    """
    🔒 Encode messages read from stdin, one JSON array of hex symbols per line.

    Example:
    ```
    $ echo '["5"]' | wiresafe encode --code code.json --seed 7
    ```
    """
    with _handle_errors():
        scheme = _load_scheme(code)
    rng = np.random.default_rng(seed)
    failed = False
    for number, line in _read_lines():
        try:
            message = _parse_vector(scheme.field, line, scheme.k, "message")
            typer.echo(json.dumps(encode(scheme, message, rng).to_hex()))
        except Exception as e:
            err_console.print(f"❌ [red]ERROR:[/red] line {number}: {str(e)}")
            failed = True
    if failed:
        raise typer.Exit(EXIT_USAGE)


@app.command("decode")
def decode_command(
    code: Annotated[Path, typer.Option(help="Code file written by `wiresafe construct --out`.")],
) -> None:
    """
    🔓 Decode codewords read from stdin, one JSON array of hex symbols per line.

    Example:
    ```
    $ wiresafe encode --code code.json < messages.jsonl | wiresafe decode --code code.json
    ```
    """
    with _handle_errors():
        scheme = _load_scheme(code)
    failed = False
    for number, line in _read_lines():
        try:
            codeword = _parse_vector(scheme.field, line, scheme.n, "codeword")
            typer.echo(json.dumps(decode(scheme, codeword).to_hex()))
        except Exception as e:
            err_console.print(f"❌ [red]ERROR:[/red] line {number}: {str(e)}")
            failed = True
    if failed:
        raise typer.Exit(EXIT_USAGE)


@app.command("simulate")
def simulate(
    graph: Annotated[str, typer.Option(help="Built-in topology (butterfly, line, diamond) or a JSON file.")] = "butterfly",
    m: Annotated[int, typer.Option("--m", help="Extension degree of GF(2^m).")] = 2,
    modulus: Annotated[str, typer.Option(help="Irreducible modulus as hex.")] = "",
    n: Annotated[int, typer.Option("--n", help="Number of source packets.")] = 2,
    mu: Annotated[Optional[int], typer.Option("--mu", help="Wiretapper strength.")] = None,
    k: Annotated[Optional[int], typer.Option("--k", help="Message length, k = n - mu.")] = None,
    seed: Annotated[int, typer.Option(help="Seed of the random network code and of the encoder.")] = 0,
    wiretap: Annotated[str, typer.Option(help="Comma-separated edge ids to tap.")] = "",
    out: Annotated[Optional[Path], typer.Option(help="Also write the transcript to this file.")] = None,
) -> None:
    """
    📡 Send one encoded message through a random network code and decode it at every sink.

    Exits with status 2 when a sink cannot decode.

    Example:
    ```
    $ wiresafe simulate --graph butterfly --seed 3 --wiretap e3
    ```
    """
    with _handle_errors():
        config = RunConfig("simulate", m=m, modulus=modulus, n=n, k=k, mu=mu, graph=graph, seed=seed, out=out)
        k_, mu_ = config.split(default_mu=1)
        net = load_network(graph)
        field = config.field
        code = assign_random_code(net, n, seed)
        scheme = CosetScheme(build_gabidulin(field, n, k_))
        rng = np.random.default_rng(seed)
        message = ExtVector(field, rng.integers(0, field.order, size=k_, dtype=np.uint64))
        x = encode(scheme, message, rng)
        received = transmit(code, x)

        sinks: Dict[str, Any] = {}
        for sink in net.sinks:
            entry: Dict[str, Any] = {"received": received[sink].to_hex()}
            try:
                recovered = decode(scheme, sink_decode(code, sink, received[sink]))
                entry.update(decoded=recovered.to_hex(), ok=bool(recovered == message))
            except InfeasibleSinkError as e:
                entry.update(decoded=None, ok=False, error=str(e))
            sinks[sink] = entry

        transcript: Dict[str, Any] = {
            "network": net.name,
            "field": field.to_dict(),
            "n": n,
            "k": k_,
            "mu": mu_,
            "seed": seed,
            "mincut": mincut(net),
            "feasible": is_feasible(code),
            "message": message.to_hex(),
            "codeword": x.to_hex(),
            "sinks": sinks,
        }
        if wiretap:
            tapped = [e.strip() for e in wiretap.split(",") if e.strip()]
            B = build_wiretap_matrix(code, tapped)
            payloads = edge_payloads(code, x)
            transcript["wiretap"] = {
                "edges": [e for e in net.edge_ids if e in set(tapped)],
                "B": B.to_lists(),
                "W": [payloads[e].hex() for e in net.edge_ids if e in set(tapped)],
            }
        _emit(transcript, config.out)
    if not all(entry["ok"] for entry in sinks.values()):
        raise typer.Exit(EXIT_INSECURE)


@app.command("audit")
def audit(
    scheme: Annotated[str, typer.Option(help="Outer code: gabidulin, clear or mds.")] = "gabidulin",
    m: Annotated[int, typer.Option("--m", help="Extension degree of GF(2^m).")] = 3,
    modulus: Annotated[str, typer.Option(help="Irreducible modulus as hex.")] = "",
    n: Annotated[int, typer.Option("--n", help="Number of source packets.")] = 3,
    mu: Annotated[Optional[int], typer.Option("--mu", help="Number of tapped links.")] = None,
    k: Annotated[Optional[int], typer.Option("--k", help="Message length; defaults to n - mu.")] = None,
    graph: Annotated[
        Optional[str], typer.Option(help="Audit every mu-edge set of this network instead of every binary B.")
    ] = None,
    seed: Annotated[int, typer.Option(help="Seed of the random network code (with --graph).")] = 0,
    workers: Annotated[int, typer.Option(help="Worker threads.")] = 1,
    budget: Annotated[
        Optional[int], typer.Option(help=f"Enumeration budget; overrides {BUDGET_ENV_VAR_NAME}.")
    ] = None,
    joint_budget: Annotated[
        Optional[int], typer.Option(help="Cap on (message, randomness) pairs tabulated per observation.")
    ] = None,
    wiretap_set_budget: Annotated[
        Optional[int], typer.Option(help="Cap on edge sets visited with --graph.")
    ] = None,
    out: Annotated[Optional[Path], typer.Option(help="Also write the report to this file.")] = None,
) -> None:
    """
    🕵️ Audit the secrecy of a coset scheme by exhaustive enumeration.

    Without `--graph` the scheme is checked against every full-rank mu x n binary observation
    matrix, which covers every binary network code. Exits with status 2 when INSECURE.

    Examples:

    * The GF(2³) example, all 42 observation matrices:
    ```
    $ wiresafe audit
    ```

    * Every single-edge tap of the butterfly:
    ```
    $ wiresafe audit --graph butterfly --m 2 --n 2 --mu 1
    ```
    """
    with _handle_errors():
        config = RunConfig(
            "audit",
            m=m,
            modulus=modulus,
            n=n,
            k=k,
            mu=mu,
            graph=graph,
            seed=seed,
            budget=budget,
            joint_budget=joint_budget,
            wiretap_set_budget=wiretap_set_budget,
            out=out,
        )
        k_, mu_ = config.split(default_mu=2)
        with override_budget(config.budget, config.joint_budget, config.wiretap_set_budget):
            coset_scheme = _build_scheme(scheme, config.field, n, k_)
            report: SecrecyReport
            if graph is None:
                report = audit_wiretap_channel(coset_scheme, mu_, workers=workers)
            else:
                code = assign_random_code(load_network(graph), n, seed)
                if not is_feasible(code):
                    err_console.print(f"⚠️ Network code for seed {seed} is infeasible; auditing anyway")
                report = audit_network(code, coset_scheme, mu_, workers=workers)
        payload = report.to_dict()
        payload["scheme"]["name"] = scheme
        _emit(payload, config.out)
    if not report.secure:
        raise typer.Exit(EXIT_INSECURE)


@app.command("bench")
def bench(
    m: Annotated[int, typer.Option("--m", help="Extension degree of GF(2^m).")] = 8,
    n: Annotated[Optional[List[int]], typer.Option("--n", help="Code lengths; repeat the flag for several.")] = None,
    iterations: Annotated[int, typer.Option(help="Timed runs per operation; the median is reported.")] = 20,
    batch: Annotated[int, typer.Option(help="Words encoded per timed run.")] = 256,
    seed: Annotated[int, typer.Option(help="Seed of the benchmark inputs.")] = 0,
    as_json: Annotated[bool, typer.Option("--json", help="Print JSON instead of a table.")] = False,
    out: Annotated[Optional[Path], typer.Option(help="Also write the JSON results to this file.")] = None,
) -> None:
    """
    ⏱️ Time encode, decode and field multiplication over an (n, k) grid.

    Example:
    ```
    $ wiresafe bench --m 8 --n 8 --n 16 --n 32
    ```
    """
    with _handle_errors():
        rows = bench_grid(m, tuple(n or (8, 16, 32)), iterations=iterations, batch=batch, seed=seed)
        fit = fit_cost_model(rows)
        payload = {
            "m": m,
            "mul_ns": bench_mul(m, iterations, seed=seed),
            "rows": [row.to_dict() for row in rows],
            "fit": fit.to_dict(),
        }
        if as_json or out is not None:
            text = json.dumps(payload, indent=2)
            if out is not None:
                out.write_text(text + "\n")
            if as_json:
                typer.echo(text)
        if not as_json:
            table = Table(title=f"GF(2^{m}) coset coding")
            for column in ("n", "k", "k(n-k)", "encode ns/word", "decode ns/word"):
                table.add_column(column, justify="right")
            for row in rows:
                table.add_row(str(row.n), str(row.k), str(row.work), f"{row.encode_ns:.0f}", f"{row.decode_ns:.0f}")
            print(table)
            print(f"mul: {payload['mul_ns']:.2f} ns/product, fit R² = {fit.r_squared:.3f}")


if __name__ == "__main__":
    try:
        app()
    except KeyboardInterrupt:
        sys.exit(1)
