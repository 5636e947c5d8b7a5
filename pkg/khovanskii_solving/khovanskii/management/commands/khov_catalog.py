from django.core.management.base import CommandError
from django.utils.translation import gettext as _

from khovanskii.catalog import CATALOG_NAMES, get_instance
from khovanskii.poly import FieldSpec
from khovanskii.systemfile import instance_to_json

from ._base import KhovanskiiCommand


class Command(KhovanskiiCommand):
    help = _("Prints a named problem instance as a SystemFile.")
    reads_file = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('name', nargs='?', default=None,
                            help=_("one of: %(names)s") % {'names': ', '.join(CATALOG_NAMES)})
        parser.add_argument('--seed', type=int, default=1)
        parser.add_argument('--field', default=None, help=_("QQ or a prime p; each entry has its own default"))
        parser.add_argument('--list', action='store_true', help=_("list the catalog names"))

    def handle(self, *args, **options):
        if options['list'] or not options['name']:
            for name in CATALOG_NAMES:
                self.stdout.write(name)
            return
        try:
            field = FieldSpec.from_label(options['field']) if options['field'] else None
        except ValueError as error:
            raise CommandError(str(error), returncode=1)
        try:
            instance = get_instance(options['name'], options['seed'], field)
        except (KeyError, ValueError):
            raise CommandError(_("Unknown catalog entry %(name)s") % {'name': options['name']}, returncode=1)
        self.write_json(instance_to_json(instance))
