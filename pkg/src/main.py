"""The ``mll`` command-line front end.

Every subcommand writes JSON to standard output with sorted keys (``dot``
writes DOT source unless ``--json`` is given). Domain errors become
``{"error": code, "detail": {...}}`` with exit status 1; usage errors exit 2.
"""
import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from src.core import canonical
from src.core.coherence import CONTROLS, DIAGRAM_NAMES, SuiteConfig, run_suite, summarize
from src.core.compose import compose, identity, tensor_mor
from src.core.errors import MLLError
from src.core.formula import Side, formula_to_json, leaves, neg_depth, parse, print_formula
from src.core.net import (
    JElement, ProofNet, dr_correct, enumerate_hom, enumerate_j, net_from_json, net_to_json, revalidate,
)
from src.infrastructure.config_manager import ConfigManager
from src.infrastructure.dot_export import render_dot

logger = logging.getLogger(__name__)


class InputError(MLLError):
    code = 'invalid_input'


def _emit(payload: Any) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, ensure_ascii=False) + '\n')


def _load(path: str) -> Any:
    try:
        if path == '-':
            return json.load(sys.stdin)
        with open(path, 'r') as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError, RecursionError) as e:
        raise InputError(f"cannot read {path}: {str(e)}", path=path) from e


def _load_net(path: str, check: bool = True):
    data = _load(path)
    if not isinstance(data, dict) or 'cod' not in data:
        raise InputError(f"{path} does not hold a net or element object", path=path)
    return net_from_json(data, check=check)


# ---------- canonical registry ----------


@dataclass(frozen=True)
class Constructor:
    # argument kinds: 'formula', 'net' or 'element'
    kinds: Tuple[str, ...]
    build: Callable[..., Any]


CANONICAL: Dict[str, Constructor] = {
    'identity': Constructor(('formula',), identity),
    'alpha': Constructor(('formula',) * 3, canonical.alpha),
    'alpha_inv': Constructor(('formula',) * 3, canonical.alpha_inv),
    'sigma': Constructor(('formula',) * 2, canonical.sigma),
    'evaluation': Constructor(('formula',) * 2, canonical.evaluation),
    'psi': Constructor(('formula',) * 3, canonical.psi),
    'psi_direct': Constructor(('formula',) * 3, canonical.psi_direct),
    'psi_inv': Constructor(('formula',) * 3, canonical.psi_inv),
    'iota': Constructor(('formula',), canonical.iota),
    'iota_inv': Constructor(('formula',), canonical.iota_inv),
    'curry': Constructor(('net',), canonical.curry),
    'uncurry': Constructor(('net',), canonical.uncurry),
    'curry_chain': Constructor(('net',), canonical.curry_chain),
    'transpose': Constructor(('net',), canonical.transpose),
    'dual_of': Constructor(('net',), canonical.dual_of),
    'inverse': Constructor(('net',), canonical.inverse),
    'e_inv': Constructor(('net',), canonical.e_inv),
    'tensor_mor': Constructor(('net', 'net'), lambda f, g: tensor_mor(f, g, check=True)),
    'lolli_mor': Constructor(('net', 'net'), canonical.lolli_mor),
    'e': Constructor(('element',), canonical.e),
    'l': Constructor(('element',), canonical.lin_eval),
    'm': Constructor(('element', 'element'), canonical.m),
    'lin_of': Constructor(('element', 'formula'), canonical.lin_of),
}


def _canon_argument(kind: str, text: str):
    if kind == 'formula':
        return parse(text)
    value = _load_net(text)
    expected = ProofNet if kind == 'net' else JElement
    if not isinstance(value, expected):
        raise InputError(f"{text} holds a {type(value).__name__}, expected a {kind}", path=text)
    return value


# ---------- commands ----------


def cmd_parse(args: argparse.Namespace, config: ConfigManager) -> int:
    formula = parse(args.formula)
    _emit({
        'formula': print_formula(formula),
        'json': formula_to_json(formula),
        'neg_depth': neg_depth(formula),
        'leaves': [{'addr': leaf.addr, 'var': leaf.var, 'polarity': leaf.polarity.value}
                   for leaf in leaves(formula, Side.COD)],
    })
    return 0


def cmd_check(args: argparse.Namespace, config: ConfigManager) -> int:
    value = revalidate(_load_net(args.file, check=False))
    payload = {'status': 'correct'}
    if args.json:
        payload['switchings'] = dr_correct(value).switchings
    _emit(payload)
    return 0


def cmd_compose(args: argparse.Namespace, config: ConfigManager) -> int:
    nets = [_canon_argument('net', path) for path in args.files]
    result = nets[0]
    for net in nets[1:]:
        result = compose(result, net, check=args.check)
    _emit(net_to_json(result))
    return 0


def _bound(args: argparse.Namespace, config: ConfigManager) -> int:
    bound = args.max_leaves if args.max_leaves is not None else config.get_cli_config()['max_leaves']
    if not config.validate_bound(bound):
        raise InputError(f"--max-leaves must be positive, got {bound}", bound=bound)
    return bound


def cmd_hom(args: argparse.Namespace, config: ConfigManager) -> int:
    nets = enumerate_hom(parse(args.dom), parse(args.cod), _bound(args, config))
    if args.count:
        _emit({'count': len(nets)})
    else:
        _emit({'count': len(nets), 'nets': [net_to_json(net) for net in nets]})
    return 0


def cmd_j(args: argparse.Namespace, config: ConfigManager) -> int:
    elements = enumerate_j(parse(args.formula), _bound(args, config))
    if args.count:
        _emit({'count': len(elements)})
    else:
        _emit({'count': len(elements), 'elements': [net_to_json(x) for x in elements]})
    return 0


def cmd_canon(args: argparse.Namespace, config: ConfigManager) -> int:
    constructor = CANONICAL[args.name]
    if len(args.args) != len(constructor.kinds):
        raise InputError(f"{args.name} takes {len(constructor.kinds)} arguments "
                         f"({', '.join(constructor.kinds)}), got {len(args.args)}",
                         expected=list(constructor.kinds))
    values = [_canon_argument(kind, text) for kind, text in zip(constructor.kinds, args.args)]
    _emit(net_to_json(constructor.build(*values)))
    return 0


def _comma_list(text: Optional[str]) -> Optional[List[str]]:
    if text is None:
        return None
    return [item.strip() for item in text.split(',') if item.strip()]


def cmd_coherence(args: argparse.Namespace, config: ConfigManager) -> int:
    overrides = {
        'vars': _comma_list(args.vars),
        'max_leaves': args.max_leaves,
        'exhaustive_leaves': args.exhaustive_leaves,
        'neg_depth': args.neg_depth,
        'seed': args.seed,
        'samples': args.samples,
        'workers': args.workers,
        'diagrams': _comma_list(args.diagrams),
        'inject': _comma_list(args.inject),
    }
    try:
        config.update_suite_settings({key: value for key, value in overrides.items() if value is not None})
        suite_config = SuiteConfig.from_config(config.get_suite_config())
        reports = run_suite(suite_config)
    except ValueError as e:
        if isinstance(e, MLLError):
            raise
        raise InputError(str(e)) from e
    summary = summarize(reports, suite_config)
    if args.json:
        _emit({'reports': [report.to_json() for report in reports], 'summary': summary})
    else:
        for report in reports:
            _emit(report.to_json())
        _emit({'summary': summary})
    # a diagram with no non-vacuous instance fails the run too
    return 1 if summary['failures'] or not summary['all_non_vacuous'] else 0


def cmd_config(args: argparse.Namespace, config: ConfigManager) -> int:
    try:
        text = config.export_config(args.output)
    except OSError as e:
        raise InputError(f"cannot write {args.output}: {str(e)}", path=args.output) from e
    if not args.output:
        sys.stdout.write(text + '\n')
    return 0


def cmd_dot(args: argparse.Namespace, config: ConfigManager) -> int:
    source = render_dot(_load_net(args.file), name=args.name)
    if args.json:
        _emit({'dot': source})
    else:
        sys.stdout.write(source)
    return 0


COMMANDS: Dict[str, Callable[[argparse.Namespace, ConfigManager], int]] = {
    'parse': cmd_parse,
    'check': cmd_check,
    'compose': cmd_compose,
    'hom': cmd_hom,
    'j': cmd_j,
    'canon': cmd_canon,
    'coherence': cmd_coherence,
    'dot': cmd_dot,
    'config': cmd_config,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='always emit one structured JSON object')
    parser = argparse.ArgumentParser(prog='mll', description='Unit-free MLL proof nets with negation.')
    parser.add_argument('--config', help='JSON configuration file merged over the defaults')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('parse', parents=[common], help='parse and print a formula')
    p.add_argument('formula')

    p = sub.add_parser('check', parents=[common], help='check a net or element given as JSON')
    p.add_argument('file', help="JSON file, or - for standard input")

    p = sub.add_parser('compose', parents=[common], help='compose nets left to right')
    p.add_argument('files', nargs='+')
    p.add_argument('--check', action='store_true', help='revalidate the result')

    for name, arguments in (('hom', ('dom', 'cod')), ('j', ('formula',))):
        p = sub.add_parser(name, parents=[common], help=f"enumerate {'hom-sets' if name == 'hom' else 'J-sets'}")
        for argument in arguments:
            p.add_argument(argument)
        p.add_argument('--count', action='store_true')
        p.add_argument('--max-leaves', type=int)

    p = sub.add_parser('canon', parents=[common], help='build a canonical morphism')
    p.add_argument('name', choices=sorted(CANONICAL))
    p.add_argument('args', nargs='*', help='formulas as text, nets and elements as JSON files')

    p = sub.add_parser('coherence', parents=[common], help='run the coherence suite')
    p.add_argument('--vars')
    p.add_argument('--max-leaves', type=int)
    p.add_argument('--exhaustive-leaves', type=int, help='check every grid tuple up to this many leaves')
    p.add_argument('--neg-depth', type=int)
    p.add_argument('--seed', type=int)
    p.add_argument('--samples', type=int)
    p.add_argument('--workers', type=int)
    p.add_argument('--diagrams', help=f"comma list from {','.join(DIAGRAM_NAMES)}")
    p.add_argument('--inject', help=f"negative controls: {','.join(CONTROLS)}")

    p = sub.add_parser('dot', parents=[common], help='render a net or element as Graphviz DOT')
    p.add_argument('file')
    p.add_argument('--name', default='net')

    p = sub.add_parser('config', help='print the effective configuration as JSON')
    p.add_argument('--output', help='write to this file instead of standard output')
    return parser


def _level(config: ConfigManager) -> int:
    return getattr(logging, config.get_log_level().upper(), logging.WARNING)


def _load_config(config: ConfigManager, path: str) -> None:
    try:
        config.import_config(path)
    except (OSError, ValueError) as e:
        raise InputError(f"cannot use configuration {path}: {str(e)}", path=path) from e
    logging.getLogger().setLevel(_level(config))


def main(argv: Optional[Sequence[str]] = None) -> int:
    config = ConfigManager()
    logging.basicConfig(
        level=_level(config),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            _load_config(config, args.config)
        return COMMANDS[args.command](args, config)
    except MLLError as e:
        logger.debug(f"{args.command} failed: {str(e)}")
        _emit({'error': e.code, 'detail': e.detail()})
        return 1
    except Exception as e:
        logger.error(f"Command {args.command} error: {str(e)}")
        raise


if __name__ == '__main__':
    sys.exit(main())
