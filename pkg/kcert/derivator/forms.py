from django import forms
from django.conf import settings
from django.core.exceptions import ValidationError

from .ringlin import RingKind, is_prime

SUBCOMMANDS = (
    'check-simplicial', 'hom-table', 'ext-table', 'verify-iso1', 'verify-iso2', 'independence',
    'k0', 'remark', 'b-family', 'decompose', 'all',
)

RING_CHOICES = (
    ('both', 'both local rings'),
    ('eps', 'F_p[eps]/eps^2'),
    ('zp2', 'Z/p^2'),
)

RING_KINDS = {
    'eps': (RingKind.EPS,),
    'zp2': (RingKind.ZP2,),
    'both': (RingKind.EPS, RingKind.ZP2),
}

FORMAT_CHOICES = (
    ('table', 'tables'),
    ('json-lines', 'one JSON record per line'),
)


def kcert_setting(name):
    return settings.KCERT[name]


class RunConfigForm(forms.Form):
    subcommand = forms.ChoiceField(choices=[(s, s) for s in SUBCOMMANDS])
    p = forms.IntegerField(required=False, min_value=2)
    ring = forms.ChoiceField(choices=RING_CHOICES, required=False)
    level = forms.IntegerField(required=False, min_value=0)
    cap = forms.IntegerField(required=False, min_value=2)
    output_format = forms.ChoiceField(choices=FORMAT_CHOICES, required=False)
    parallel = forms.IntegerField(required=False, min_value=1)
    output = forms.CharField(required=False)
    count = forms.IntegerField(required=False, min_value=1)
    seed = forms.IntegerField(required=False, min_value=0)

    # Per-subcommand (default, bound) setting names for --level.
    LEVELS = {
        'check-simplicial': ('DEFAULT_SIMPLICIAL_LEVEL', 'MAX_SIMPLICIAL_LEVEL'),
        'b-family': ('DEFAULT_SIMPLICIAL_LEVEL', 'MAX_SIMPLICIAL_LEVEL'),
        'verify-iso1': ('DEFAULT_ISO_LEVEL', 'MAX_ISO_LEVEL'),
        'verify-iso2': ('DEFAULT_ISO_LEVEL', 'MAX_ISO_LEVEL'),
        'independence': ('DEFAULT_ISO_LEVEL', 'MAX_ISO_LEVEL'),
        'hom-table': ('DEFAULT_TABLE_LEVEL', 'MAX_TABLE_LEVEL'),
        'ext-table': ('DEFAULT_TABLE_LEVEL', 'MAX_TABLE_LEVEL'),
        'decompose': ('DEFAULT_DECOMPOSE_LEVEL', 'MAX_TABLE_LEVEL'),
    }

    def clean_p(self):
        p = self.cleaned_data.get('p')
        if p is None:
            return kcert_setting('DEFAULT_PRIME')
        if not is_prime(p):
            raise ValidationError(f'{p} is not a prime.')
        if p > kcert_setting('MAX_PRIME'):
            raise ValidationError(f'Primes above {kcert_setting("MAX_PRIME")} are not supported.')
        return p

    def clean_ring(self):
        return self.cleaned_data.get('ring') or 'both'

    def clean_cap(self):
        cap = self.cleaned_data.get('cap')
        if cap is None:
            return kcert_setting('DEFAULT_CAP')
        if cap > kcert_setting('MAX_CAP'):
            raise ValidationError(f'Rank cap {cap} is above {kcert_setting("MAX_CAP")}.')
        return cap

    def clean_output_format(self):
        return self.cleaned_data.get('output_format') or 'table'

    def clean_parallel(self):
        return self.cleaned_data.get('parallel') or 1

    def clean_count(self):
        return self.cleaned_data.get('count') or kcert_setting('DEFAULT_DECOMPOSE_COUNT')

    def clean_seed(self):
        seed = self.cleaned_data.get('seed')
        return kcert_setting('DEFAULT_SEED') if seed is None else seed

    def clean(self):
        cleaned_data = super().clean()
        subcommand = cleaned_data.get('subcommand')
        level = cleaned_data.get('level')
        if subcommand in self.LEVELS:
            default, bound = (kcert_setting(name) for name in self.LEVELS[subcommand])
            if level is None:
                level = default
            if level > bound:
                raise ValidationError({'level': f'Level {level} is beyond the supported bound {bound} '
                                                f'for {subcommand}.'})
        cleaned_data['level'] = level
        return cleaned_data

    def ring_kinds(self):
        return RING_KINDS[self.cleaned_data['ring']]
