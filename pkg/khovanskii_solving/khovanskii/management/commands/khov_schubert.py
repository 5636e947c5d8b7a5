import numpy as np
from django.core.management.base import CommandError
from django.utils.translation import gettext as _

from khovanskii.catalog import (SchubertCondition, chart_matrix, osculating_flag, random_flag,
                                schubert_equations)
from khovanskii.poly import FieldSpec
from khovanskii.solver import solve
from khovanskii.systemfile import count_to_json, instance_to_json, solutions_to_json

from ._base import KhovanskiiCommand


def parse_conditions(text):
    try:
        return [tuple(int(v) for v in part.split(',')) for part in text.split(';') if part.strip()]
    except ValueError:
        raise CommandError(_("Conditions look like '2,4,6;2,4,6;2,4,6'."), returncode=1)


def parse_points(text):
    field = FieldSpec.rationals()
    try:
        return [field.coerce(part.strip()) for part in text.split(',') if part.strip()]
    except (ValueError, ZeroDivisionError):
        raise CommandError(_("Osculation points must be rational numbers."), returncode=1)


class Command(KhovanskiiCommand):
    help = _("Builds a Schubert problem on Gr(k,m) in Pluecker coordinates and solves it.")
    reads_file = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--k', type=int, required=True)
        parser.add_argument('--m', type=int, required=True)
        parser.add_argument('--conditions', required=True, help=_("alphas separated by ';'"))
        parser.add_argument('--osculating', default=None,
                            help=_("osculation points, one per condition, instead of random flags"))
        parser.add_argument('--seed', type=int, default=1)
        parser.add_argument('--field', default='QQ', help=_("QQ or a prime p"))
        parser.add_argument('--dreg', type=int, default=None)
        parser.add_argument('--emit', action='store_true', help=_("print the SystemFile instead of solving"))

    def handle(self, *args, **options):
        k, m = options['k'], options['m']
        if not 1 <= k < m:
            raise CommandError(_("Need 1 <= k < m."), returncode=1)
        try:
            field = FieldSpec.from_label(options['field'])
        except ValueError as error:
            raise CommandError(str(error), returncode=1)
        alphas = parse_conditions(options['conditions'])
        if options['osculating']:
            points = parse_points(options['osculating'])
            if len(points) != len(alphas):
                raise CommandError(_("Give one osculation point per condition."), returncode=1)
            flags = [osculating_flag(s, m, field) for s in points]
        else:
            rng = np.random.default_rng(options['seed'])
            flags = [random_flag(m, rng, field) for _ in alphas]
        conditions = [SchubertCondition(alpha, flag) for alpha, flag in zip(alphas, flags)]
        instance = schubert_equations(k, m, conditions, field, recommended_dreg=options['dreg'],
                                      label=f'schubert:gr{k}{m}')
        if options['emit']:
            self.write_json(instance_to_json(instance))
            return
        count_only = field.is_prime_field
        solutions = solve(instance.system, dreg=options['dreg'], seed=options['seed'], adaptive=True,
                          count_only=count_only)
        if count_only:
            document = count_to_json(solutions)
        else:
            document = solutions_to_json(solutions)
            charts = []
            for row in solutions.normalized('first'):
                try:
                    h = chart_matrix(k, m, row)
                except ZeroDivisionError:
                    charts.append(None)
                    continue
                charts.append([[[float(z.real), float(z.imag)] for z in line] for line in h])
            document['charts'] = charts
        document['raw_equations'] = instance.raw_equation_count
        document['equations'] = instance.system.s
        self.write_json(document)
