"""Command line front end.

Secret intake never goes through argv (argv is visible to every process on
the host): passphrases arrive through --passphrase-fd, the MSCIKDF_PASSPHRASE
environment variable, or an interactive prompt; mnemonics arrive through
--mnemonic-file, stdin, or a prompt.

Exit codes: 0 success, 1 verification or property failure, 2 usage error,
3 domain error (bad mnemonic, unknown context, and so on).
"""

from __future__ import annotations

import json
import os
import sys

import click

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import __version__
from .context import format_context_text, parse_context_text
from .errors import (
    ContextEncodingError,
    MnemonicError,
    MscikdfError,
    ParameterError,
    SlotMismatchError,
    UnregisteredSlotError,
    VectorFormatError,
)
from .harness import HarnessConfig, report_json, report_table, run_negative_controls, run_suite
from .kat import SUITES, kat_generate, kat_verify, read_vectors, write_vectors
from .mnemonic import Mnemonic, RootEntropy, decode_mnemonic, encode_root
from .slots import BUILTIN_REGISTRY, finalize
from .states import (
    PROFILE_TEST_VECTORS,
    HardeningParams,
    Passphrase,
    derive_usage_state,
    params_for_profile,
    profile_name,
)
from .context import derive as derive_material

PASSPHRASE_ENV = "MSCIKDF_PASSPHRASE"

_STAGES = (
    (MnemonicError, "mnemonic"),
    (VectorFormatError, "vectors"),
    (UnregisteredSlotError, "context"),
    (ContextEncodingError, "context"),
    (SlotMismatchError, "slot"),
    (ParameterError, "parameters"),
)


def _stage_of(exc: MscikdfError) -> str:
    for cls, stage in _STAGES:
        if isinstance(exc, cls):
            return stage
    return "derivation"


def _fail_domain(exc: MscikdfError) -> "click.exceptions.Exit":
    click.echo(f"error: {_stage_of(exc)}: {exc}", err=True)
    return click.exceptions.Exit(3)


def _read_passphrase(fd: int | None) -> str:
    if fd is not None:
        with os.fdopen(fd, "rb", closefd=True) as fh:
            raw = fh.read()
        if raw.endswith(b"\n"):
            raw = raw[:-1]
        return raw.decode("utf-8")
    env = os.environ.get(PASSPHRASE_ENV)
    if env is not None:
        return env
    if not sys.stdin.isatty():
        click.echo(
            f"error: no passphrase source; pass --passphrase-fd or set {PASSPHRASE_ENV}",
            err=True,
        )
        raise click.exceptions.Exit(2)
    return click.prompt("Passphrase", hide_input=True, default="", show_default=False)


def _read_mnemonic(path: str | None) -> Mnemonic:
    if path == "-":
        text = sys.stdin.read()
    elif path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    elif sys.stdin.isatty():
        text = click.prompt("Mnemonic", hide_input=True)
    else:
        click.echo("error: no mnemonic source; pass --mnemonic-file PATH or -", err=True)
        raise click.exceptions.Exit(2)
    normalized = " ".join(text.split())
    if not normalized:
        click.echo("error: mnemonic: empty input", err=True)
        raise click.exceptions.Exit(2)
    return Mnemonic.from_text(normalized)


def _hardening_from_config(path: str) -> HardeningParams | None:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    entry = data.get("hardening")
    if entry is None:
        return None
    if isinstance(entry, str):
        return params_for_profile(entry)
    if isinstance(entry, dict):
        try:
            return HardeningParams(
                memory_mib=int(entry["memory_mib"]),
                iterations=int(entry["iterations"]),
                parallelism=int(entry.get("parallelism", 1)),
            )
        except KeyError as exc:
            raise ParameterError(f"config hardening table missing key {exc}") from exc
    raise ParameterError("config key 'hardening' must be a profile name or a table")


def _resolve_hardening(profile: str | None, config: str | None) -> HardeningParams:
    if profile is not None:
        return params_for_profile(profile)
    if config is not None:
        from_file = _hardening_from_config(config)
        if from_file is not None:
            return from_file
    return params_for_profile("default")


def _warn_hardening(params: HardeningParams) -> None:
    if profile_name(params) == "test-vectors" or params == PROFILE_TEST_VECTORS:
        click.echo(
            "warning: test-vectors hardening is for reproducing vectors only, "
            "never for protecting real roots",
            err=True,
        )


def _load_state(mnemonic_file: str | None, passphrase_fd: int | None, params: HardeningParams):
    mnemonic = _read_mnemonic(mnemonic_file)
    root = decode_mnemonic(mnemonic)
    text = _read_passphrase(passphrase_fd)
    if text == "":
        click.echo("warning: empty passphrase; anyone holding the mnemonic owns this state", err=True)
    return derive_usage_state(root, Passphrase.from_text(text), params)


@click.group()
@click.version_option(version=__version__, prog_name="mscikdf")
def main() -> None:
    """Deterministic multi-algorithm key derivation from one mnemonic root."""


@main.group()
def root() -> None:
    """Create or inspect mnemonic roots."""


@root.command("new")
@click.option("--bits", type=click.Choice(["128", "256"]), default="256", show_default=True,
              help="Root entropy size.")
def root_new(bits: str) -> None:
    """Generate a fresh root and print its mnemonic."""
    import secrets

    entropy = RootEntropy(secrets.token_bytes(int(bits) // 8))
    mnemonic = encode_root(entropy)
    click.echo("warning: this mnemonic IS the root; store it offline", err=True)
    click.echo(mnemonic.text)


@root.command("decode")
@click.option("--mnemonic-file", type=str, default=None,
              help="Read the mnemonic from PATH, or - for stdin.")
@click.option("--reveal-entropy", is_flag=True,
              help="Print the raw entropy hex (sensitive).")
def root_decode(mnemonic_file: str | None, reveal_entropy: bool) -> None:
    """Validate a mnemonic's checksum and report its shape."""
    try:
        mnemonic = _read_mnemonic(mnemonic_file)
        entropy = decode_mnemonic(mnemonic)
    except MscikdfError as exc:
        raise _fail_domain(exc)
    click.echo(f"valid {len(mnemonic.words)}-word mnemonic, {entropy.bits}-bit root")
    if reveal_entropy:
        click.echo(entropy.data.hex())


@main.command()
@click.argument("context_text")
@click.option("--mnemonic-file", type=str, default=None,
              help="Read the mnemonic from PATH, or - for stdin.")
@click.option("--passphrase-fd", type=int, default=None,
              help="Read the passphrase from this open file descriptor.")
@click.option("--hardening", "profile", type=click.Choice(["default", "test-vectors"]),
              default=None, help="Hardening profile (overrides config file).")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="TOML config file.")
@click.option("--format", "fmt", type=click.Choice(["hex", "json"]), default="hex",
              show_default=True)
@click.option("--reveal-secret", is_flag=True, help="Print the secret itself (sensitive).")
def derive(
    context_text: str,
    mnemonic_file: str | None,
    passphrase_fd: int | None,
    profile: str | None,
    config_path: str | None,
    fmt: str,
    reveal_secret: bool,
) -> None:
    """Derive the key material named by CONTEXT_TEXT.

    Example context: mscikdf:v1/ed25519/edwards25519/backup/0
    """
    try:
        context = parse_context_text(context_text)
        params = _resolve_hardening(profile, config_path)
        _warn_hardening(params)
        state = _load_state(mnemonic_file, passphrase_fd, params)
        material = derive_material(state, context)
        pair = finalize(material)
    except MscikdfError as exc:
        raise _fail_domain(exc)

    if fmt == "json":
        out = {
            "context_text_form": format_context_text(context),
            "slot": pair.slot.name,
            "state_fingerprint_hex": state.fingerprint_hex,
        }
        if pair.public is not None:
            out["public_hex"] = pair.public.hex()
        if reveal_secret:
            out["secret_hex"] = pair.secret.hex()
        click.echo(json.dumps(out, indent=2))
        return
    click.echo(f"slot:        {pair.slot.name}")
    click.echo(f"fingerprint: {state.fingerprint_hex}")
    if pair.public is not None:
        click.echo(f"public:      {pair.public.hex()}")
    if reveal_secret:
        click.echo(f"secret:      {pair.secret.hex()}")
    else:
        click.echo("secret:      (hidden; pass --reveal-secret to print)")


@main.command()
@click.option("--mnemonic-file", type=str, default=None,
              help="Read the mnemonic from PATH, or - for stdin.")
@click.option("--passphrase-fd", type=int, default=None,
              help="Read the passphrase from this open file descriptor.")
@click.option("--hardening", "profile", type=click.Choice(["default", "test-vectors"]),
              default=None, help="Hardening profile (overrides config file).")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="TOML config file.")
def fingerprint(
    mnemonic_file: str | None,
    passphrase_fd: int | None,
    profile: str | None,
    config_path: str | None,
) -> None:
    """Print the 8-byte fingerprint of the (root, passphrase) usage state."""
    try:
        params = _resolve_hardening(profile, config_path)
        _warn_hardening(params)
        state = _load_state(mnemonic_file, passphrase_fd, params)
    except MscikdfError as exc:
        raise _fail_domain(exc)
    click.echo(state.fingerprint_hex)


@main.group()
def kat() -> None:
    """Generate or verify known-answer vector files."""


@kat.command("generate")
@click.option("--suite", type=click.Choice(sorted(SUITES)), required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
def kat_generate_cmd(suite: str, out_path: str) -> None:
    """Write a deterministic vector suite to --out."""
    try:
        records = kat_generate(suite)
        write_vectors(out_path, records)
    except MscikdfError as exc:
        raise _fail_domain(exc)
    click.echo(f"wrote {len(records)} records to {out_path}")


@kat.command("verify")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def kat_verify_cmd(path: str) -> None:
    """Re-derive every record in PATH and compare."""
    try:
        records = read_vectors(path)
        report = kat_verify(records)
    except MscikdfError as exc:
        raise _fail_domain(exc)
    for failure in report.failures:
        click.echo(
            f"record {failure.index + 1}: mismatch at {failure.failed_field}: {failure.detail}",
            err=True,
        )
    click.echo(report.summary())
    if not report.all_passed:
        raise click.exceptions.Exit(1)


@main.command()
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def slots(as_json: bool) -> None:
    """List the registered derivation slots."""
    rows = [
        {
            "algorithm_id": f"0x{s.algorithm_id:04x}",
            "curve_id": f"0x{s.curve_id:04x}",
            "algorithm": s.algorithm,
            "curve": s.curve,
            "name": s.name,
            "kind": s.kind,
            "secret_length": s.secret_length,
            "expand_length": s.expand_length,
        }
        for s in BUILTIN_REGISTRY
    ]
    if as_json:
        click.echo(json.dumps(rows, indent=2))
        return
    for r in rows:
        click.echo(
            f"{r['algorithm_id']} {r['curve_id']}  {r['algorithm']:>10}/{r['curve']:<14}"
            f" {r['kind']:<12} {r['secret_length']:>3}B  {r['name']}"
        )


@main.command()
@click.option("--fast", is_flag=True, help="Smoke-level sample counts.")
@click.option("--negative-controls", "controls", is_flag=True,
              help="Also run the broken-engine fixtures, which must fail.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def check(fast: bool, controls: bool, as_json: bool) -> None:
    """Run the statistical property suite against this build."""
    cfg = HarnessConfig.fast() if fast else HarnessConfig()
    reports = run_suite(cfg)
    ok = all(r.passed for r in reports)
    control_reports = []
    if controls:
        control_reports = run_negative_controls(cfg)
        # Controls are broken on purpose; a passing control is the failure.
        ok = ok and not any(r.passed for r in control_reports)
    if as_json:
        click.echo(report_json(list(reports) + control_reports))
    else:
        click.echo(report_table(list(reports) + control_reports))
        if controls:
            caught = sum(not r.passed for r in control_reports)
            click.echo(f"negative controls caught: {caught}/{len(control_reports)}")
    if not ok:
        raise click.exceptions.Exit(1)


if __name__ == "__main__":
    main()
