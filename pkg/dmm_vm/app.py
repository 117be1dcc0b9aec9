# -*- coding: utf-8 -*-
"""Main entry point"""

import argparse
import configparser
import importlib
import logging
import os.path
from pathlib import Path
import simplejson
import sys

from . import engine, exceptions, io, network, transforms
from . import __version__


#: Path to configuration file.
PATH_CONFIGFILE = "~/.dmmvmrc"

#: Configuration file section
CONFIG_SECTION = 'dmm_vm'

#: Exit status on success
EXIT_OK = 0

#: Exit status on usage errors
EXIT_USAGE = 1

#: Exit status on parse or validation errors
EXIT_INVALID = 2

#: Exit status when execution halts
EXIT_HALT = 3


class ArgumentParser(argparse.ArgumentParser):
    """Argument parser that exits with ``EXIT_USAGE`` on errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, '{}: error: {}\n'.format(self.prog, message))


class DmmVmAppBase:
    """The main class of the app."""

    def __init__(self, args):
        #: Command line arguments, some default values can come from
        #: configuration file.
        self.args = args
        # Setup the logging infrastructure
        self._setup_logging()
        #: Configuration from configuration file
        self.config = self._load_config(self.args.config_file)
        # Update arguments from configuration and check
        self._update_args_from_config()
        self._check_args()
        #: Transform registry, extended by plugins
        self.registry = self._load_registry()

    def _setup_logging(self):
        """Setup the logging."""
        FORMAT = '%(asctime)-15s %(levelname)-8s %(message)s'
        logging.basicConfig(format=FORMAT)
        logger = logging.getLogger()
        if self.args.verbose:
            logger.setLevel(logging.DEBUG)
        else:
            logger.setLevel(logging.INFO)

    def _load_config(self, path_configfile):
        """Load configuration from ~/.dmmvmrc, if it exists"""
        config = configparser.ConfigParser()
        if not path_configfile:
            return config
        realpath_configfile = os.path.abspath(os.path.expanduser(
            path_configfile))
        if os.path.exists(realpath_configfile):
            logging.info('Loading configuration from %s (realpath: %s)',
                         path_configfile, realpath_configfile)
            config.read(realpath_configfile)
        else:
            logging.debug('Config file %s not found', path_configfile)
        return config

    def _update_args_from_config(self):
        seed = self.config.get(CONFIG_SECTION, 'seed', fallback=None)
        if seed is not None and getattr(self.args, 'seed', 0) is None:
            try:
                self.args.seed = int(seed)
            except ValueError:
                raise exceptions.InvalidCommandLineArguments(
                    'Configuration value seed = {!r} is not an '
                    'integer'.format(seed))
        plugins = self.config.get(CONFIG_SECTION, 'plugins', fallback='')
        self.args.plugins = [
            name.strip() for name in plugins.split(',') if name.strip()
        ] + list(self.args.plugins)

    def _check_args(self):
        pass

    def _load_registry(self):
        registry = transforms.builtin_registry()
        for name in self.args.plugins:
            logging.info('Loading transform plugin %s', name)
            try:
                module = importlib.import_module(name)
            except ImportError as e:
                raise exceptions.InvalidCommandLineArguments(
                    'Could not import plugin {}: {}'.format(name, e))
            if not callable(getattr(module, 'register', None)):
                raise exceptions.InvalidCommandLineArguments(
                    'Plugin {} has no register(registry) function'.format(
                        name))
            module.register(registry)
        return registry

    def run(self):
        path = Path(self.args.net)
        if not path.is_file():
            raise exceptions.InvalidCommandLineArguments(
                'Network file {} not found'.format(path))
        program = io.read_program(path, self.registry)
        return self._run_impl(program)

    def _run_impl(self, program):
        raise NotImplementedError('Override me!')


class DmmVmRunApp(DmmVmAppBase):
    """Run a network and print the trace of its watched ports."""

    def _check_args(self):
        if self.args.seed is None:
            self.args.seed = 0
        if self.args.ticks is None and not self.args.dump_canonical:
            raise exceptions.InvalidCommandLineArguments(
                '--ticks is required unless --dump-canonical is given')
        if self.args.ticks is not None and self.args.ticks < 0:
            raise exceptions.InvalidCommandLineArguments(
                '--ticks must not be negative')
        try:
            self.args.watch = [
                io.parse_output_port(text) for text in self.args.watch]
        except exceptions.ParseException as e:
            raise exceptions.InvalidCommandLineArguments(
                'Invalid --watch value: {}'.format(e.message))

    def _run_impl(self, program):
        if self.args.dump_canonical:
            sys.stdout.write(io.serialize(program))
            return EXIT_OK
        watch = self.args.watch or list(program.watch)
        logging.info('Running %d ticks with seed %d, watching %s',
                     self.args.ticks, self.args.seed,
                     ', '.join(map(str, watch)) or 'nothing')
        state = engine.init_state(
            program.signature, program.matrix, program.initial_outputs,
            updater=program.updater, seed=self.args.seed,
            pinned=program.neurons)
        trace = []
        for state, record in engine.iter_run(state, self.args.ticks, watch):
            for line in io.format_trace([record]):
                print(line, flush=True)
            trace.append(record)
        if self.args.output_json:
            logging.info('Writing JSON to %s', self.args.output_json)
            with open(self.args.output_json, 'wt') as outputf:
                simplejson.dump(trace, outputf, indent=4, cls=io.JsonEncoder)
        return EXIT_OK


class DmmVmCheckApp(DmmVmAppBase):
    """Parse and validate a network, print a summary."""

    def _run_impl(self, program):
        pinned = set(program.neurons)
        if program.updater is not None:
            pinned.add(program.updater)
        print('{} types, {} neurons, {} entries'.format(
            len(program.signature),
            len(network.live_neurons(program.matrix, pinned)),
            len(program.matrix)))
        return EXIT_OK


def run(args):
    """Program entry point after parsing arguments."""
    try:
        return args.app_class(args).run()
    except exceptions.InvalidCommandLineArguments as e:
        print('error: {}'.format(e), file=sys.stderr)
        return EXIT_USAGE
    except (exceptions.ParseException, exceptions.ValidationException,
            exceptions.TransformException) as e:
        print('error: {}'.format(e), file=sys.stderr)
        return EXIT_INVALID
    except exceptions.RunTimeHalt as e:
        print('halted: {}'.format(e), file=sys.stderr)
        return EXIT_HALT


def main(argv=None):
    """Main entry point for parsing command line arguments."""
    parser = ArgumentParser(prog='dmm-vm')
    subparsers = parser.add_subparsers(
        dest='command', help='Select the command to execute')
    subparsers.required = True

    parser.add_argument(
        '--version', action='version', version='%(prog)s {}'.format(
            __version__))
    parser.add_argument(
        '--verbose', '-v', dest='verbose', default=False, action='store_true',
        help='Enable verbose logging')
    parser.add_argument(
        '--config-file', default=PATH_CONFIGFILE,
        help='Path to INI-style configuration file'
    )
    parser.add_argument(
        '--plugin', dest='plugins', default=[], action='append',
        help=('Module with a register(registry) function adding custom '
              'transforms; may be given multiple times'))

    # Sub command: dmm-vm run

    parser_run = subparsers.add_parser(
        'run', help='Run a network and print its trace.')
    parser_run.set_defaults(app_class=DmmVmRunApp)

    group = parser_run.add_argument_group('Input / Output Options')
    group.add_argument(
        '--net', required=True, help='Path to network file.')
    group.add_argument(
        '--watch', default=[], action='append',
        help=('Output port <type>.<copy> to trace; may be given multiple '
              'times, replaces the watch list of the file'))
    group.add_argument(
        '--dump-canonical', default=False, action='store_true',
        help='Print the canonical form of the network and exit')
    group.add_argument(
        '--output-json', '-o', type=str,
        help='Path to additionally write the trace as JSON to.')

    group = parser_run.add_argument_group('Execution Options')
    group.add_argument(
        '--ticks', type=int, help='Number of ticks to run.')
    group.add_argument(
        '--seed', type=int, default=None,
        help='Seed of the random source (default: from config file or 0)')

    # Sub command: dmm-vm check

    parser_check = subparsers.add_parser(
        'check', help='Parse and validate a network file.')
    parser_check.set_defaults(app_class=DmmVmCheckApp)
    parser_check.add_argument(
        '--net', required=True, help='Path to network file.')

    args = parser.parse_args(argv)

    return run(args)


if __name__ == '__main__':
    sys.exit(main())
