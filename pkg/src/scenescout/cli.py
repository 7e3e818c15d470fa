"""Headless command-line interface.

    scenescout preview --from LAT,LON --to LAT,LON --name TEXT
    scenescout explore --intent TEXT --at LAT,LON
    scenescout serve
    scenescout eval sample --logs DIR --fraction 0.2 --seed 7
    scenescout eval annotate TASKS.json --out ANNOTATIONS.jsonl
    scenescout eval report ANNOTATIONS.jsonl --format markdown
    scenescout eval diff A.jsonl B.jsonl

Configuration comes from --config (YAML) plus SCENESCOUT_* environment
overrides. Errors exit nonzero with machine-readable JSON on stderr;
configuration problems exit 2.
"""

from __future__ import annotations

import json
import sys
import uuid
from pathlib import Path

import click

from .errors import ConfigError, ScenescoutError
from .evalharness import (
    AnnotationStore,
    AnnotationTask,
    Consistency,
    Correctness,
    DescriptionAnnotation,
    ErrorType,
    InfoType,
    Mode,
    ObjectiveSubtype,
    Redundancy,
    Relevance,
    SentenceAnnotation,
    aggregate,
    diff_stores,
    load_log_dir,
    sample_tasks,
)
from .exploration import ExplorationEngine, SessionStatus
from .geo import GeoCoordinate, SamplingConfig
from .preview import PreviewGenerator, PreviewRequest, PreviewResult
from .serde import pretty_dumps, read_json
from .service.config import ServiceConfig


def _fail(err: ScenescoutError) -> None:
    payload = {"code": err.code, "message": str(err)}
    click.echo(json.dumps(payload), err=True)
    sys.exit(2 if isinstance(err, ConfigError) else 1)


def _load_config(path: str | None) -> ServiceConfig:
    return ServiceConfig.load(path)


def _parse_coord(value: str) -> GeoCoordinate:
    try:
        lat_text, lon_text = value.split(",", 1)
        return GeoCoordinate(float(lat_text.strip()), float(lon_text.strip()))
    except (ValueError, TypeError):
        raise click.BadParameter(f"expected LAT,LON, got {value!r}")


def _providers(config: ServiceConfig):
    from .service.app import build_provider_set

    return build_provider_set(config)


def _cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


def render_preview_markdown(doc: dict) -> str:
    lines = [f"# Route preview to {doc.get('destination_name', 'destination')}", ""]
    lines.append("| Segment | Short | Medium | Long |")
    lines.append("| --- | --- | --- | --- |")
    for segment in doc.get("segments", ()):  # both header rows live in the web UI
        sample = segment["sample"]
        label = f"{segment['index'] + 1}. {sample['kind']} ({round(sample['distance_from_start'])} m)"
        triple = segment.get("triple")
        if triple:
            lines.append(
                f"| {_cell(label)} | {_cell(triple['short'])} | {_cell(triple['medium'])} | {_cell(triple['long'])} |"
            )
        else:
            lines.append(f"| {_cell(label)} | (failed: {segment.get('error')}) | | |")
    destination = doc.get("destination")
    lines.append("")
    if destination:
        lines.append(f"## Destination detail: {doc.get('destination_name', '')}")
        for heading, key in (
            ("Path", "path_summary"),
            ("Place", "place_summary"),
            ("Mobility Cues", "mobility_cues"),
            ("Sidewalk", "sidewalk"),
            ("Textual Cues", "signage_text"),
        ):
            lines.append("")
            lines.append(f"### {heading}")
            lines.append(destination.get(key) or "(none)")
    elif doc.get("destination_error"):
        lines.append(f"## Destination detail failed: {doc['destination_error']}")
    return "\n".join(lines)


@click.group()
def main() -> None:
    """Street-view imagery as structured text."""


@main.command("preview")
@click.option("--from", "origin", required=True, help="Origin LAT,LON")
@click.option("--to", "destination", required=True, help="Destination LAT,LON")
@click.option("--name", "destination_name", required=True, help="Destination display name")
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["markdown", "json"]), default="markdown")
def preview_cmd(origin: str, destination: str, destination_name: str, config_path: str | None, fmt: str):
    """Generate a full route preview and print it."""
    try:
        config = _load_config(config_path)
        providers = _providers(config)
        generator = PreviewGenerator(
            providers,
            sampling=SamplingConfig(config.min_interval_m, config.max_interval_m),
            places_radius_m=config.places_radius_m,
        )
        result: PreviewResult = generator.generate(
            PreviewRequest(_parse_coord(origin), _parse_coord(destination), destination_name)
        )
    except ScenescoutError as err:
        _fail(err)
        return
    doc = result.to_dict()
    click.echo(pretty_dumps(doc) if fmt == "json" else render_preview_markdown(doc))


@main.command("explore")
@click.option("--intent", required=True)
@click.option("--at", "start", required=True, help="Start LAT,LON")
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--verbosity", type=click.Choice(["short", "medium", "long"]), default="medium")
def explore_cmd(intent: str, start: str, config_path: str | None, verbosity: str):
    """Interactive exploration loop in the terminal."""
    try:
        config = _load_config(config_path)
        providers = _providers(config)
        engine = ExplorationEngine(
            providers, step_budget=config.step_budget, places_radius_m=config.places_radius_m
        )
        session = engine.start_session(intent, _parse_coord(start), session_id=uuid.uuid4().hex[:12])
    except ScenescoutError as err:
        _fail(err)
        return
    click.echo(f"Intention: {intent}")
    click.echo("Keywords: " + ", ".join(session.keywords))
    additions = click.prompt("Add keywords (comma-separated, empty for none)", default="", show_default=False)
    engine.add_keywords(session, [a for a in additions.split(",") if a.strip()])
    try:
        while session.status is not SessionStatus.ENDED:
            if session.status is SessionStatus.WALKING:
                triple = engine.describe_block(session)
                if triple:
                    click.echo(f"\n[{session.position}] {getattr(triple, verbosity)}")
                else:
                    click.echo(f"\n[{session.position}] (block description failed)")
                if not click.confirm("Continue walking?", default=True):
                    engine.end_session(session)
                    break
                engine.step_forward(session)
            elif session.status is SessionStatus.AT_INTERSECTION:
                options = engine.enumerate_directions(session)
                if len(options) >= 2:
                    options = engine.suggest_direction(session, options)
                click.echo("\nWhich direction would you like to explore next?")
                for option in options:
                    mark = " (Suggested direction)" if option.suggested else ""
                    prev = " (previously traveled)" if option.is_reverse else ""
                    click.echo(
                        f"{option.idx}. Heading {option.cardinal} on {option.street_name}:"
                        f" {option.description.body}{mark}{prev}"
                    )
                idx = click.prompt("Choose option (0 to end)", type=int)
                if idx == 0:
                    engine.end_session(session)
                    break
                engine.choose_direction(session, idx)
    except ScenescoutError as err:
        _fail(err)
        return
    click.echo("Session ended.")


@main.command("serve")
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
def serve_cmd(config_path: str | None, host: str | None, port: int | None):
    """Start the HTTP service."""
    import uvicorn

    from .service.app import create_app

    try:
        config = _load_config(config_path)
        app = create_app(config)
    except ScenescoutError as err:
        _fail(err)
        return
    uvicorn.run(app, host=host or config.listen_host, port=port or config.listen_port, log_level="info")


@main.group("eval")
def eval_group() -> None:
    """Description evaluation harness."""


@eval_group.command("sample")
@click.option("--logs", "logs_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--fraction", default=0.2, type=float, show_default=True)
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--out", "out_path", default=None, type=click.Path())
def eval_sample_cmd(logs_dir: str, fraction: float, seed: int, out_path: str | None):
    """Sample descriptions from usage logs into annotation tasks."""
    try:
        records = load_log_dir(logs_dir)
        tasks = sample_tasks(records, fraction, seed)
    except ScenescoutError as err:
        _fail(err)
        return
    payload = pretty_dumps([t.to_dict() for t in tasks])
    if out_path:
        Path(out_path).write_text(payload, encoding="utf-8")
        click.echo(f"wrote {len(tasks)} tasks to {out_path}")
    else:
        click.echo(payload)


_INFO_CHOICES = {"s": InfoType.SUBJECTIVE, "o": InfoType.OBJECTIVE, "m": InfoType.MIXED}
_SUBTYPE_CHOICES = {
    "p": ObjectiveSubtype.POI,
    "f": ObjectiveSubtype.FACTUAL_OBJECT,
    "a": ObjectiveSubtype.ACCESSIBILITY,
    "o": ObjectiveSubtype.OTHER,
}
_CORRECTNESS_CHOICES = {
    "t": Correctness.CANNOT_TELL,
    "i": Correctness.INCORRECT,
    "p": Correctness.PARTIALLY_CORRECT,
    "c": Correctness.CORRECT,
}
_ERROR_CHOICES = {
    "d": ErrorType.PLAUSIBLE_DETAIL,
    "a": ErrorType.PLAUSIBLE_ADJECTIVE,
    "f": ErrorType.FACTUAL_ERROR,
    "s": ErrorType.SPATIAL_ERROR,
    "h": ErrorType.HALLUCINATION,
    "o": ErrorType.OTHER,
}
_CONSISTENCY_CHOICES = {"n": Consistency.NOT_LIKELY, "p": Consistency.POSSIBLY, "l": Consistency.LIKELY}
_REDUNDANCY_CHOICES = {
    "n": Redundancy.NO_PREV,
    "r": Redundancy.REPEATS,
    "a": Redundancy.ADDS_NEW,
    "u": Redundancy.UPDATES,
}
_RELEVANCE_CHOICES = {"f": Relevance.FULLY, "p": Relevance.PARTIALLY, "n": Relevance.NOT}


def _choose(label: str, choices: dict):
    keys = "/".join(choices)
    value = click.prompt(f"{label} [{keys}]", type=click.Choice(list(choices)), show_choices=False)
    return choices[value]


@eval_group.command("annotate")
@click.argument("tasks_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path())
def eval_annotate_cmd(tasks_file: str, out_path: str):
    """Interactively rate every sentence of every sampled task."""
    tasks = [AnnotationTask.from_dict(d) for d in read_json(tasks_file)]
    store = AnnotationStore(out_path)
    for task in tasks:
        click.echo(f"\n== Task {task.key} ({task.mode.value}, {task.verbosity.value})")
        prev = task.context.get("prev_description")
        click.echo(f"Previous description: {prev or 'None'}")
        click.echo(f"Nearby places: {task.context.get('nearby_places') or 'None'}")
        click.echo(f"Views: {', '.join(task.context.get('views', [])) or 'None'}")
        for idx, sentence in enumerate(task.sentences):
            click.echo(f"\nSentence {idx + 1}: {sentence}")
            info = _choose("Type of information (subjective/objective/mixed)", _INFO_CHOICES)
            subtypes: frozenset[ObjectiveSubtype] = frozenset()
            if info in (InfoType.OBJECTIVE, InfoType.MIXED):
                raw = click.prompt("Objective subtypes (poi/factual/accessibility/other; comma list)", default="f")
                subtypes = frozenset(
                    _SUBTYPE_CHOICES[piece.strip()[0]] for piece in raw.split(",") if piece.strip()
                )
            correctness = _choose("Accuracy (cannot-tell/incorrect/partially/correct)", _CORRECTNESS_CHOICES)
            error = ErrorType.NONE
            if correctness in (Correctness.INCORRECT, Correctness.PARTIALLY_CORRECT):
                error = _choose(
                    "Error type (detail/adjective/factual/spatial/hallucination/other)", _ERROR_CHOICES
                )
            consistency = _choose("Consistency over time (not/possibly/likely)", _CONSISTENCY_CHOICES)
            redundancy = _choose("Redundancy (no-prev/repeats/adds/updates)", _REDUNDANCY_CHOICES)
            store.record(
                task,
                idx,
                SentenceAnnotation(
                    info_type=info,
                    objective_subtypes=subtypes,
                    correctness=correctness,
                    error_type=error,
                    consistency=consistency,
                    redundancy=redundancy,
                ),
            )
        if task.mode is Mode.VIRTUAL_EXPLORATION:
            relevance = _choose("Description relevance (fully/partially/not)", _RELEVANCE_CHOICES)
        else:
            relevance = Relevance.NOT_APPLICABLE
        store.record_description(task, DescriptionAnnotation(relevance=relevance))
    click.echo(f"\nannotations written to {out_path}")


@eval_group.command("report")
@click.argument("annotations_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "markdown"]), default="json")
def eval_report_cmd(annotations_file: str, fmt: str):
    """Aggregate an annotation file into percentage panels."""
    try:
        sentences, descriptions = AnnotationStore(annotations_file).load()
        report = aggregate(sentences, descriptions)
    except ScenescoutError as err:
        _fail(err)
        return
    click.echo(report.to_json() if fmt == "json" else report.to_markdown())


@eval_group.command("diff")
@click.argument("file_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("file_b", type=click.Path(exists=True, dir_okay=False))
def eval_diff_cmd(file_a: str, file_b: str):
    """Show disagreements between two annotators' files."""
    disagreements = diff_stores(AnnotationStore(file_a), AnnotationStore(file_b))
    click.echo(pretty_dumps(disagreements))
    if disagreements:
        sys.exit(1)


if __name__ == "__main__":
    main()
