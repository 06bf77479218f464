"""
The ``ckspace`` command line.

Every subcommand reads JSONL logs and JSON documents and writes its
outputs atomically. Stochastic subcommands take ``--seed``; the same
inputs and seed give byte-identical outputs. Library errors end the
process with exit code 1 and one line ``error: <Name>: <message>`` on
standard error; usage errors exit with code 2.
"""

import argparse
import json
import logging
import sys

import numpy as np
import pandas as pd

import ckspace
from ckspace.config import load_config
from ckspace.engagement import (
    engagement_columns,
    erp_dataset,
    estimate_engagement,
    extract_engagement_features,
    fit_engagement,
    fit_erp,
    timescale_split,
)
from ckspace.errors import CKSpaceError, ParseError, ValidationError
from ckspace.events import answer_sequences, group_by_student, read_log, sessionize, write_log
from ckspace.knowledge import SkillParams, fit_params, load_sample_skill_net, load_skill_net
from ckspace.pedagogy import BeliefModel, FrequencyModel, run_stop_policy
from ckspace.reports import ReportKind, build_report
from ckspace.screener import (
    ScreenerModel,
    extract_screen_features,
    fit_screener,
    load_feature_bank,
    screen,
    select_features,
)
from ckspace.simulation import simulate, write_truth
from ckspace.traits import cluster_offline, extract_profiles
from ckspace.temporal import temporal_pipeline
from ckspace.utils.internal import atomic_write, dump_json, write_csv


log = logging.getLogger(__name__)


def _sessions(args, settings):
    return sessionize(read_log(args.logs), settings.events.session_gap_ms)


def _net(args):
    return load_skill_net(args.net) if args.net else load_sample_skill_net()


def _params(args):
    return SkillParams.load(args.params) if args.params else None


def _simulate(args, settings):
    (students, run) = simulate(settings.simulation, args.seed, _net(args), params=_params(args))

    write_log(run.events, args.out)

    if args.truth:
        write_truth(run.truth, args.truth)

    if args.students:
        with atomic_write(args.students) as stream:
            for student in students:
                stream.write(dump_json(student.to_dict()))
                stream.write("\n")


def _fit_knowledge(args, settings):
    sequences = answer_sequences(_sessions(args, settings))
    (params, summary) = fit_params(sequences, _net(args), settings.knowledge)

    params.save(args.out)

    if args.summary:
        write_csv(summary.to_frame(params), args.summary)


def _fit_erp(args, settings):
    sessions = _sessions(args, settings)
    alpha = settings.engagement.slow_alpha

    splits = list()
    for student_sessions in group_by_student(sessions).values():
        events = sorted((e for s in student_sessions for e in s), key=lambda e: e.t)
        features = extract_engagement_features(events)
        if not features.empty:
            splits.append(timescale_split(features[engagement_columns], alpha))

    model = fit_engagement(splits, settings.engagement)
    data = erp_dataset(sessions, alpha, lambda split: estimate_engagement(split, model))

    if data.empty:
        raise ValidationError("the logs contain no repeated error")

    names = [c for c in data.columns if c not in ("student_id", "label")]
    erp = fit_erp(
        data[names].to_numpy(dtype=float),
        data["label"].to_numpy(),
        groups=data["student_id"].to_numpy(),
        config=settings.engagement,
        seed=args.seed,
        feature_names=names,
    )

    erp.save(args.out)


def _cluster(args, settings):
    profiles = extract_profiles(_sessions(args, settings), _net(args), args.sessions, _params(args))
    (model, assignments) = cluster_offline(profiles, settings.traits, args.seed, args.k)

    write_csv(assignments, args.out)

    if args.model:
        model.save(args.model)


def _temporal_cluster(args, settings):
    result = temporal_pipeline(_sessions(args, settings), settings.temporal, args.seed)
    write_csv(result.ribbons, args.out)


def _read_labels(path):
    labels = dict()

    with open(path, encoding="utf-8") as stream:
        for (number, line) in enumerate(stream, 1):
            if not line.strip():
                continue

            try:
                record = json.loads(line)
                labels[str(record["sid"])] = bool(record["dd"])
            except (ValueError, KeyError, TypeError) as e:
                raise ParseError(f"expected an object with 'sid' and 'dd': {e}", line=number) from e

    return labels


def _fit_screener(args, settings):
    bank = load_feature_bank(args.bank)
    frame = extract_screen_features(_sessions(args, settings), bank, _net(args))
    labels = _read_labels(args.labels)

    unknown = sorted(set(frame.index) - set(labels))
    if unknown:
        raise ValidationError(f"no label for {len(unknown)} student(s), e.g. {unknown[0]!r}")

    y = np.array([labels[s] for s in frame.index])
    features = select_features(frame, y, settings.screener, bank)
    model = fit_screener(frame, y, features, settings.screener)

    model.save(args.out)


def _screen(args, settings):
    model = ScreenerModel.load(args.model)
    frame = extract_screen_features(_sessions(args, settings), model.features, _net(args))

    rows = list()
    for (student_id, row) in frame.iterrows():
        result = screen(row, model)
        rows.append((student_id, result.label.value, result.posterior, len(result.features), result.minutes))

    write_csv(pd.DataFrame(rows, columns=["student_id", "label", "posterior", "n_features", "minutes"]), args.out)


def _stop_policy_eval(args, settings):
    net = _net(args)
    params = _params(args) or SkillParams.from_config(settings.knowledge)
    rows = list()

    for (student, sequence) in sorted(answer_sequences(_sessions(args, settings)).items()):
        skills = list(dict.fromkeys(s for (s, _) in sequence if s in net))

        for skill in skills:
            outcomes = [c for (s, c) in sequence if s == skill]

            for (name, model) in (("dbn", BeliefModel(net, params)), ("frequency", FrequencyModel())):
                outcome = run_stop_policy(model, skill, outcomes, settings.stop_policy)
                rows.append((student, skill, name, outcome.decision.value, outcome.attempts))

    frame = pd.DataFrame(rows, columns=["student_id", "skill", "model", "decision", "attempts"])
    write_csv(frame, args.out)


def _report(args, settings):
    net = _net(args) if args.kind in (ReportKind.range_progress.value, ReportKind.skill_status.value) else None
    report = build_report(args.kind, _sessions(args, settings), net, _params(args), settings.temporal, args.seed)

    write_csv(report, args.out)


def _version():
    schemas = ", ".join(f"{name} {v}" for (name, v) in sorted(ckspace.schema_versions.items()))
    return f"ckspace {ckspace.version} (schemas: {schemas})"


def build_parser():
    parser = argparse.ArgumentParser(prog="ckspace", description="Student modelling for adaptive learning.")
    parser.add_argument("--version", action="version", version=_version())

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="log progress; repeat for debug output")
    common.add_argument("--config", help="a JSON configuration document")

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=0, help="the random seed")

    logs = argparse.ArgumentParser(add_help=False)
    logs.add_argument("--logs", required=True, help="a JSONL event log")

    net = argparse.ArgumentParser(add_help=False)
    net.add_argument("--net", help="a skill net document; defaults to the sample net")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--params", help="a knowledge parameter document")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--out", required=True, help="the output path")

    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = commands.add_parser("simulate", parents=[common, seeded, net, params, out], help="simulate training logs")
    p.add_argument("--truth", help="write the hidden state sidecar here")
    p.add_argument("--students", help="write the simulated students here")
    p.set_defaults(handler=_simulate)

    p = commands.add_parser("fit-knowledge", parents=[common, logs, net, out], help="fit knowledge parameters")
    p.add_argument("--summary", help="write the per-skill fit summary here")
    p.set_defaults(handler=_fit_knowledge)

    p = commands.add_parser("fit-erp", parents=[common, seeded, logs, out], help="fit the error repetition model")
    p.set_defaults(handler=_fit_erp)

    p = commands.add_parser("cluster", parents=[common, seeded, logs, net, params, out], help="cluster student profiles")
    p.add_argument("--k", type=int, help="a fixed number of clusters")
    p.add_argument("--sessions", type=int, help="use only the first sessions of each student")
    p.add_argument("--model", help="write the cluster model here")
    p.set_defaults(handler=_cluster)

    p = commands.add_parser("temporal-cluster", parents=[common, seeded, logs, out], help="cluster session behavior over time")
    p.set_defaults(handler=_temporal_cluster)

    p = commands.add_parser("fit-screener", parents=[common, logs, net, out], help="select features and fit a screener")
    p.add_argument("--labels", required=True, help="a JSONL file of {\"sid\", \"dd\"} records")
    p.add_argument("--bank", help="a feature bank; defaults to the shipped bank")
    p.set_defaults(handler=_fit_screener)

    p = commands.add_parser("screen", parents=[common, logs, net, out], help="screen students")
    p.add_argument("--model", required=True, help="a screener model")
    p.set_defaults(handler=_screen)

    p = commands.add_parser("stop-policy-eval", parents=[common, logs, net, params, out], help="run the stop policy")
    p.set_defaults(handler=_stop_policy_eval)

    p = commands.add_parser("report", parents=[common, seeded, logs, net, params, out], help="build a report")
    p.add_argument("--kind", required=True, choices=[k.value for k in ReportKind], help="the report")
    p.set_defaults(handler=_report)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)

    if args.verbose:
        logging.basicConfig(
            level=logging.DEBUG if args.verbose > 1 else logging.INFO,
            format="%(levelname)s %(name)s: %(message)s",
        )

    try:
        settings = load_config(args.config)
        args.handler(args, settings)
    except (CKSpaceError, OSError) as e:
        print(f"error: {e.__class__.__name__}: {e}", file=sys.stderr)
        return 1

    return 0


__all__ = [
    "build_parser",
    "main",
]
