from fastapi import APIRouter, Depends, HTTPException, status

from app.core.config import Settings, get_settings
from app.core.errors import ChtgError
from app.schemas import Certificate, CertifyRequest, SearchRequest, SearchSummary
from app.services import reports

router = APIRouter(tags=["certificates"])


@router.post("/certify", response_model=Certificate)
def certify(request: CertifyRequest, config: Settings = Depends(get_settings)):
    """Run the non-discreteness certificate for one (m, alpha)."""
    if request.alpha is None and request.alpha_turns is None:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail="alpha or alpha_turns is required",
        )
    if request.precision_bits is not None:
        config = config.model_copy(update={"precision_bits": request.precision_bits})

    try:
        return reports.certificate_report(
            request.m, request.alpha, request.alpha_turns, request.n_max, config
        )
    except (ChtgError, ValueError) as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/search", response_model=SearchSummary)
def search(request: SearchRequest, config: Settings = Depends(get_settings)):
    """Exhaustive finite-order trace search for one m."""
    return reports.search_report(request.m, request.n_max, config, request.symmetry_reduced)
