"""Summary of an experiment output directory."""

from anystore.model import BaseModel
from anystore.store import get_store
from anystore.types import Uri

from spdelab.core import paths
from spdelab.model.job import ExitCode
from spdelab.model.path import ContractionReport
from spdelab.model.poly import HypothesisCertificate
from spdelab.model.probe import BoundReport, SimulationReport


class SummaryRow(BaseModel):
    artifact: str
    check: str
    verdict: str
    margin: float | None = None


def summarize(uri: Uri) -> tuple[list[SummaryRow], ExitCode]:
    """Collect the verdicts of all artifacts found below ``uri``.

    The exit code is the worst outcome: a falsified certificate ranks above
    a failed bound check.
    """
    store = get_store(uri, serialization_mode="raw", raise_on_nonexist=False)
    rows: list[SummaryRow] = []
    code = ExitCode.PASS

    def read(key: str) -> str | None:
        data = store.get(key)
        return None if data is None else data.decode()

    if data := read(paths.CERTIFICATE):
        cert = HypothesisCertificate.from_json_str(data)
        for name, status in sorted(cert.status.items()):
            rows.append(SummaryRow(artifact=paths.CERTIFICATE, check=name, verdict=status))
        if cert.falsified:
            code = ExitCode.FALSIFIED

    reports: list[tuple[str, BoundReport]] = []
    if data := read(paths.REPORTS):
        summary = SimulationReport.from_json_str(data)
        reports.extend((paths.REPORTS, r) for r in summary.reports)
    if data := read(paths.KOLMOGOROV):
        reports.append((paths.KOLMOGOROV, BoundReport.from_json_str(data)))
    for artifact, report in reports:
        rows.append(
            SummaryRow(
                artifact=artifact,
                check=report.bound_name,
                verdict=report.verdict,
                margin=report.margin,
            )
        )
        if not report.passed and code == ExitCode.PASS:
            code = ExitCode.CHECK_FAILED

    if data := read(paths.CONTRACTION):
        contraction = ContractionReport.from_json_str(data)
        rows.append(
            SummaryRow(
                artifact=paths.CONTRACTION,
                check="picard",
                verdict="pass" if contraction.passed else "fail",
                margin=contraction.fixed_point_distance,
            )
        )
        if not contraction.passed and code == ExitCode.PASS:
            code = ExitCode.CHECK_FAILED
    return rows, code
