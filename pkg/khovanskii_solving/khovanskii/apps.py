from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class KhovanskiiConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'khovanskii'
    verbose_name = _('Khovanskii solving')
