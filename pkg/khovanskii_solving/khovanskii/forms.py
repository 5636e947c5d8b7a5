import re

from django import forms
from django.utils.translation import gettext_lazy as _

from .exceptions import PolynomialSyntaxError, SystemFileError
from .khov import build_parameterization
from .km import equation_from_form, equation_from_poly, structured_system
from .poly import FieldSpec, WeightOrder, parse_polynomial

IDENTIFIER = re.compile(r'[A-Za-z_][A-Za-z_0-9]*\Z')


class SystemFileForm(forms.Form):
    """Validates a decoded SystemFile document and builds the system it describes."""
    field = forms.Field(required=False)
    vars = forms.JSONField()
    weight = forms.JSONField()
    phi = forms.JSONField()
    equations = forms.JSONField(required=False)
    label = forms.CharField(required=False)
    dreg = forms.IntegerField(required=False, min_value=1)
    expected_count = forms.IntegerField(required=False, min_value=0)

    def clean_field(self):
        value = self.cleaned_data.get('field')
        if value in (None, '', 'QQ'):
            return FieldSpec.rationals()
        if isinstance(value, dict) and set(value) == {'Fp'}:
            value = value['Fp']
        try:
            return FieldSpec.from_label(value)
        except (TypeError, ValueError) as error:
            raise forms.ValidationError(_("Unknown field: %(error)s"), params={'error': error})

    def clean_vars(self):
        names = self.cleaned_data['vars']
        if not isinstance(names, list) or not all(isinstance(n, str) and IDENTIFIER.match(n) for n in names):
            raise forms.ValidationError(_("Variables must be a list of identifiers."))
        if len(set(names)) != len(names):
            raise forms.ValidationError(_("Variable names must be distinct."))
        return names

    def clean_weight(self):
        weight = self.cleaned_data['weight']
        if not isinstance(weight, list) or not all(isinstance(w, int) and not isinstance(w, bool) for w in weight):
            raise forms.ValidationError(_("Weight must be a list of integers."))
        return weight

    def clean_phi(self):
        phi = self.cleaned_data['phi']
        if not isinstance(phi, list) or not phi or not all(isinstance(p, str) for p in phi):
            raise forms.ValidationError(_("Generators must be a non-empty list of polynomial strings."))
        return phi

    def clean_equations(self):
        equations = self.cleaned_data.get('equations') or []
        if not isinstance(equations, list):
            raise forms.ValidationError(_("Equations must be a list."))
        for number, equation in enumerate(equations):
            if not isinstance(equation, dict):
                raise forms.ValidationError(_("Equation %(number)d is not an object."), params={'number': number})
            degree = equation.get('degree')
            if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
                raise forms.ValidationError(_("Equation %(number)d needs a degree of at least 1."),
                                            params={'number': number})
            if ('poly' in equation) == ('coeffs' in equation):
                raise forms.ValidationError(_("Equation %(number)d needs exactly one of poly or coeffs."),
                                            params={'number': number})
            for term in equation.get('coeffs', []):
                if (not isinstance(term, dict) or not isinstance(term.get('alpha'), list)
                        or sum(term['alpha']) != degree or not isinstance(term.get('c'), (str, int))):
                    raise forms.ValidationError(
                        _("Equation %(number)d has a malformed term; expected alpha summing to the degree and c."),
                        params={'number': number})
        return equations

    def clean(self):
        cleaned_data = super().clean()
        names, weight, field = cleaned_data.get('vars'), cleaned_data.get('weight'), cleaned_data.get('field')
        if names is None or weight is None or field is None:
            return cleaned_data
        if len(weight) != len(names):
            self.add_error('weight', _("Weight has %(w)d entries for %(n)d variables.")
                           % {'w': len(weight), 'n': len(names)})
            return cleaned_data
        try:
            cleaned_data['phi_polys'] = [parse_polynomial(text, names, field) for text in cleaned_data.get('phi', [])]
            cleaned_data['equation_polys'] = [
                parse_polynomial(e['poly'], names, field) if 'poly' in e else None
                for e in cleaned_data.get('equations', [])]
        except PolynomialSyntaxError as error:
            self.add_error(None, str(error))
        return cleaned_data

    def to_system(self):
        """Builds the ``StructuredSystem``; mathematical failures raise from the algebra modules."""
        data = self.cleaned_data
        par = build_parameterization(data['phi_polys'], WeightOrder(data['weight']), data['field'])
        equations = []
        for entry, poly in zip(data['equations'], data['equation_polys']):
            if poly is not None:
                equations.append(equation_from_poly(par, poly, entry['degree']))
            else:
                form = {}
                for term in entry['coeffs']:
                    alpha = tuple(term['alpha'])
                    if len(alpha) != len(par.phi):
                        raise SystemFileError(f"exponent {list(alpha)} does not match {len(par.phi)} generators")
                    form[alpha] = data['field'].add(form.get(alpha, data['field'].zero),
                                                    data['field'].coerce(str(term['c'])))
                equations.append(equation_from_form(par, form, entry['degree']))
        return structured_system(par, equations, data.get('label') or '')
