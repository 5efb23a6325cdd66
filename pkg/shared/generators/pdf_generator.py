"""
Generador del PDF del informe de cotas
"""

import logging
from io import BytesIO
from typing import List, Optional

from reportlab.lib import colors
from reportlab.lib.enums import TA_CENTER
from reportlab.lib.pagesizes import letter
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.lib.units import inch
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from ..models.moments import LowerBoundSearch
from ..models.report import BoundsReport

_HEADER_BLUE = colors.HexColor('#0078D4')


class PDFGenerator:
    """Genera el PDF con las constantes, los intervalos y la auditoría de x_l"""

    def __init__(self):
        self.styles = self._create_styles()

    def _create_styles(self):
        """Crea los estilos para el PDF"""
        styles = getSampleStyleSheet()
        styles.add(ParagraphStyle(
            name='CustomTitle',
            parent=styles['Heading1'],
            fontSize=22,
            textColor=_HEADER_BLUE,
            spaceAfter=24,
            alignment=TA_CENTER
        ))
        styles.add(ParagraphStyle(
            name='CustomHeading',
            parent=styles['Heading2'],
            fontSize=14,
            textColor=_HEADER_BLUE,
            spaceAfter=12,
            spaceBefore=12
        ))
        return styles

    @staticmethod
    def _table(rows: List[List[str]], widths: List[float]) -> Table:
        table = Table(rows, colWidths=[w * inch for w in widths])
        table.setStyle(TableStyle([
            ('BACKGROUND', (0, 0), (-1, 0), _HEADER_BLUE),
            ('TEXTCOLOR', (0, 0), (-1, 0), colors.whitesmoke),
            ('ALIGN', (0, 0), (-1, -1), 'LEFT'),
            ('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
            ('FONTSIZE', (0, 0), (-1, 0), 10),
            ('BOTTOMPADDING', (0, 0), (-1, 0), 10),
            ('BACKGROUND', (0, 1), (-1, -1), colors.beige),
            ('GRID', (0, 0), (-1, -1), 1, colors.black)
        ]))
        return table

    def generate(self, report: BoundsReport, search: Optional[LowerBoundSearch] = None) -> bytes:
        """
        Genera el PDF del informe

        Args:
            report: Informe de cotas ya ensamblado
            search: Historial de la bisección de x_l (opcional)

        Returns:
            Bytes del PDF generado
        """
        logging.info("📄 Generando PDF del informe de cotas...")

        buffer = BytesIO()
        doc = SimpleDocTemplate(
            buffer,
            pagesize=letter,
            rightMargin=72,
            leftMargin=72,
            topMargin=72,
            bottomMargin=72,
            title="Cotas Max-Cut",
        )

        story = [
            Paragraph("COTAS MAX-CUT EN GRAFOS ALEATORIOS DISPERSOS", self.styles['CustomTitle']),
            Paragraph("CONSTANTES", self.styles['CustomHeading']),
            self._table(
                [
                    ['Constante', 'Valor'],
                    ['x_u', f"{report.x_u:.8f}"],
                    ['θ_u', f"{report.theta_u:.8f}"],
                    ['x_l', f"{report.x_l:.6f}"],
                ],
                [2.0, 3.0],
            ),
            Spacer(1, 0.3 * inch),
        ]

        if report.c is not None:
            story.append(Paragraph(f"INTERVALOS PARA c = {report.c:g}", self.styles['CustomHeading']))
            story.append(self._table(
                [
                    ['Cantidad', 'Inferior', 'Superior'],
                    ['MaxCut / n', f"{report.maxcut_interval[0]:.6f}", f"{report.maxcut_interval[1]:.6f}"],
                    ['Energía Ising / n', f"{report.ising_interval[0]:.6f}", f"{report.ising_interval[1]:.6f}"],
                ],
                [2.0, 1.5, 1.5],
            ))
            story.append(Paragraph(
                "<i>Válidos salvo términos o(√c) cuando c crece.</i>", self.styles['Normal']
            ))
            story.append(Spacer(1, 0.3 * inch))

        if report.tolerances:
            story.append(Paragraph("TOLERANCIAS", self.styles['CustomHeading']))
            for name, value in report.tolerances.items():
                story.append(Paragraph(f"• {name}: {value:.1e}", self.styles['Normal']))
            story.append(Spacer(1, 0.2 * inch))

        if search is not None and search.probes:
            story.append(Paragraph("BISECCIÓN DE x_l", self.styles['CustomHeading']))
            rows = [['x', 'gap', 'β*', 'Clase']]
            for probe in search.probes:
                rows.append([
                    f"{probe.x:.6f}",
                    f"{probe.gap:.3e}",
                    f"{probe.beta_star:.5f}",
                    'above' if probe.above else 'below',
                ])
            story.append(self._table(rows, [1.4, 1.4, 1.2, 1.0]))

        doc.build(story)
        pdf_bytes = buffer.getvalue()
        buffer.close()

        logging.info(f"✅ PDF generado: {len(pdf_bytes)} bytes")
        return pdf_bytes
