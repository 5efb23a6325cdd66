"""
Generadores de artefactos: CSV, JSON y PDF
"""

from .pdf_generator import PDFGenerator
from .report_writer import ReportEncoder, scan_to_csv, to_json

__all__ = [
    'PDFGenerator',
    'ReportEncoder',
    'scan_to_csv',
    'to_json',
]
