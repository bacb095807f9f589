import os
import sys
import argparse
from dataclasses import dataclass

from dotenv import load_dotenv

# Import utilities and configuration
from utils.logger import setup_logger, log_critical_error
from config.config import OUT_DIR
from errors import LabError
from messages import Messages
import reports
from handlers import analysis, families as families_handler, potential as potential_handler, solve, verify

# Load environment variables
load_dotenv()

logger = setup_logger()

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_FAILED_CLAIM = 4


@dataclass
class RunContext:
    command: str
    out_dir: str
    json: bool
    expect_fail: bool
    messages: Messages
    manifest: reports.RunManifest
    out_given: bool = False

    def path(self, name):
        return os.path.join(self.out_dir, name)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='curvature-lab',
        description='Numerical lab for Delta u = -kappa e^{2u} near an isolated singularity')
    parser.add_argument('--out', default=None, help=f'output directory (default {OUT_DIR})')
    parser.add_argument('--json', action='store_true', help='print the JSON report on stdout')
    parser.add_argument('--expect-fail', action='store_true',
                        help='the checked claim is expected to fail (negative control)')
    parser.add_argument('--lang', default='en', help='message language (en, ru)')
    parser.add_argument('--log-level', default=None)
    subparsers = parser.add_subparsers(dest='command', required=True)

    families_handler.register(subparsers)
    analysis.register(subparsers)
    solve.register(subparsers)
    verify.register(subparsers)
    potential_handler.register(subparsers)
    return parser


class ErrorHandlingMiddleware:
    """Maps handler outcomes and exceptions onto the exit-code contract"""

    def __call__(self, handler, args, ctx):
        try:
            outcome = handler(args, ctx)
        except LabError as lab_error:
            logger.error(f"{type(lab_error).__name__}: {lab_error}")
            print(ctx.messages.get('error', error=lab_error), file=sys.stderr)
            return lab_error.exit_code
        except Exception as e:
            # Handle other unexpected errors
            logger.error(f"Unexpected error in {handler.__name__}: {e}", exc_info=True)
            log_critical_error("Unexpected Error", e)
            print(ctx.messages.get('unexpected_error'), file=sys.stderr)
            return EXIT_UNEXPECTED
        return self._finish(outcome, ctx)

    @staticmethod
    def _finish(outcome, ctx):
        ctx.manifest.finish()
        payload = dict(outcome.payload)
        if ctx.out_given and not outcome.files:
            ok, message = reports.write_json(ctx.path(f'{ctx.command}.json'), payload, ctx.manifest,
                                             kind=ctx.command)
            if not ok:
                logger.error(message)
        if ctx.json:
            payload['manifest'] = ctx.manifest.to_dict()
            print(reports.dumps(payload))
        elif outcome.text:
            print(outcome.text)

        if outcome.passed is None:
            return EXIT_OK
        if ctx.expect_fail:
            verdict = 'verdict_expected_fail' if not outcome.passed else 'verdict_fail'
            if not ctx.json:
                print(ctx.messages.get(verdict))
            return EXIT_OK if not outcome.passed else EXIT_FAILED_CLAIM
        if not ctx.json:
            print(ctx.messages.get('verdict_pass' if outcome.passed else 'verdict_fail'))
        return EXIT_OK if outcome.passed else EXIT_FAILED_CLAIM


def main(argv=None):
    """Parse arguments, run one command and return its exit code"""
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return EXIT_OK if exit_request.code in (0, None) else EXIT_USAGE

    if args.log_level:
        setup_logger(args.log_level)
    ctx = RunContext(command=args.command, out_dir=args.out or OUT_DIR, json=args.json,
                     expect_fail=args.expect_fail, messages=Messages(args.lang),
                     manifest=reports.RunManifest.from_argv(argv), out_given=args.out is not None)
    logger.info(f"Running {args.command}")
    return ErrorHandlingMiddleware()(args.handler, args, ctx)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Interrupted")
        sys.exit(EXIT_UNEXPECTED)
