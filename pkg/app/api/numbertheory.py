from fastapi import APIRouter, Path

from app.schemas import NtFunction, NtResult
from app.services import reports

router = APIRouter(prefix="/nt", tags=["number theory"])


@router.get("/{function}/{x}", response_model=NtResult)
def number_theory(function: NtFunction, x: int = Path(ge=1, le=10000)):
    """Euler phi, Moebius mu or the cyclotomic polynomial of x."""
    return reports.nt_value(function, x)
