"""
Export a series on T^2 as CSV rows "x1,x2,re,im" over an N x N grid.

Usage:
    python manage.py sample --series result/f.json --grid 64 --out f.csv
"""

import csv

import numpy as np
from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from cohomology.constants import EXIT_CONFIG_ERROR
from cohomology.fourier import evaluate_grid
from cohomology.serializers import series_from_dict
from cohomology.utils import read_json


class Command(BaseCommand):
    help = 'Sample a 2-dimensional series on a uniform grid and write CSV'

    def add_arguments(self, parser):
        parser.add_argument('--series', required=True, help='Series JSON file')
        parser.add_argument(
            '--grid',
            type=int,
            default=32,
            help='Grid points per axis (default: 32)',
        )
        parser.add_argument('--out', help='CSV file (default: stdout)')

    def handle(self, *args, **options):
        try:
            series = series_from_dict(read_json(options['series']))
        except (OSError, ValueError, serializers.ValidationError) as exc:
            raise CommandError(f"Cannot read series {options['series']}: {exc}", returncode=EXIT_CONFIG_ERROR)
        if series.p != 2:
            raise CommandError(f'Grid export needs p = 2, got p = {series.p}', returncode=EXIT_CONFIG_ERROR)
        n = options['grid']
        if n < 1:
            raise CommandError('--grid must be positive', returncode=EXIT_CONFIG_ERROR)

        axis = np.arange(n) / n
        x1, x2 = np.meshgrid(axis, axis, indexing='ij')
        points = np.stack([x1.ravel(), x2.ravel()], axis=1)
        values = evaluate_grid(series, points)

        if options['out']:
            with open(options['out'], 'w', newline='', encoding='utf-8') as handle:
                self._write(handle, points, values)
            self.stdout.write(self.style.SUCCESS(f"✓ Wrote {n * n} rows to {options['out']}"))
        else:
            self._write(self.stdout, points, values)

    @staticmethod
    def _write(handle, points, values):
        writer = csv.writer(handle, lineterminator='\n')
        for (a, b), value in zip(points.tolist(), values.tolist()):
            writer.writerow([repr(a), repr(b), repr(value.real), repr(value.imag)])
