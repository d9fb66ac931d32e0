from typing import List

from fastapi import APIRouter, Depends, HTTPException, Query, status

from app.core.config import Settings, get_settings
from app.core.errors import ChtgError
from app.schemas import ScanRow, WindowModel
from app.services import reports

router = APIRouter(tags=["geometry"])


@router.get("/scan", response_model=List[ScanRow])
def scan(
    m: int = Query(ge=2),
    alpha_steps: int = Query(default=64, ge=1, le=65536),
    config: Settings = Depends(get_settings),
):
    """Trace, discriminant and isometry class on an alpha grid."""
    try:
        return reports.scan_rows(m, alpha_steps, config)
    except ChtgError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.get("/windows", response_model=List[WindowModel])
def windows(
    m: int = Query(ge=2),
    alpha_steps: int = Query(default=1024, ge=16, le=65536),
    config: Settings = Depends(get_settings),
):
    """Alpha-intervals where the product is regular elliptic."""
    return reports.window_report(m, alpha_steps, config)
