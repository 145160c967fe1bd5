from fastapi import APIRouter

router = APIRouter()


@router.get("")
def ping():
    """Liveness probe; the service keeps no external connections."""
    return "OK"
