import logging

from django.utils.translation import gettext as _

from khovanskii.conf import get_setting
from khovanskii.exceptions import KhovanskiiError
from khovanskii.models import SolveRun
from khovanskii.solver import solve
from khovanskii.systemfile import count_to_json, solutions_to_json, write_matrices_csv

from ._base import KhovanskiiCommand

logger = logging.getLogger('khovanskii')


class Command(KhovanskiiCommand):
    help = _("Solves a structured system through its Khovanskii-Macaulay kernel and prints the solutions.")

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--dreg', type=int, default=None)
        parser.add_argument('--dreg-max', type=int, default=None)
        parser.add_argument('--seed', type=int, default=None)
        parser.add_argument('--adaptive', action='store_true',
                            help=_("search for the degree where the nullity stabilizes"))
        parser.add_argument('--reduce', action='store_true')
        parser.add_argument('--normalize', choices=('first', 'raw'), default='first')
        parser.add_argument('--out', choices=('json', 'text'), default='json')
        parser.add_argument('--count-only', action='store_true',
                            help=_("stop after the multiplication matrices and report delta"))
        parser.add_argument('--matrices', metavar='PATH', default=None,
                            help=_("write the multiplication matrices as CSV"))
        parser.add_argument('--save', action='store_true', help=_("record the run in the database"))

    def handle(self, *args, **options):
        form, system = self.load(options['file'])
        dreg = options['dreg'] or form.cleaned_data.get('dreg')
        seed = options['seed']
        try:
            solutions = solve(system, dreg=dreg, seed=seed, adaptive=options['adaptive'], reduce=options['reduce'],
                              dreg_max=options['dreg_max'], count_only=options['count_only'])
        except KhovanskiiError as error:
            if options['save']:
                self.record(form, system, seed, dreg, None, 'failed', None, str(error))
            raise
        if options['matrices'] and solutions.multiplication:
            with open(options['matrices'], 'w', encoding='utf-8', newline='') as handle:
                write_matrices_csv(solutions.multiplication, handle)
        if options['count_only']:
            document = count_to_json(solutions)
        else:
            document = solutions_to_json(solutions, options['normalize'])
        if options['save']:
            run = self.record(form, system, seed, solutions.dreg, solutions.delta, 'ok', document, '')
            logger.info("saved %s", run)
        if options['out'] == 'json':
            self.write_json(document)
            return
        self.stdout.write(_("%(delta)d solutions at degree %(dreg)s") % {'delta': solutions.delta,
                                                                         'dreg': solutions.dreg})
        if not options['count_only']:
            for i, row in enumerate(solutions.normalized(options['normalize'])):
                values = ", ".join(f"{z.real:.6g}{z.imag:+.6g}j" for z in row)
                residual = solutions.residuals[i] if solutions.residuals else float('nan')
                self.stdout.write(f"[{values}]  residual={residual:.3g}")
        for warning in solutions.warnings:
            self.stderr.write(warning)

    def record(self, form, system, seed, dreg, delta, status, result, message):
        return SolveRun.objects.create(
            label=system.label, field=system.field.label, seed=get_setting('DEFAULT_SEED') if seed is None else seed,
            dreg=dreg, delta=delta, status=status, system=form.data, result=result, message=message)
