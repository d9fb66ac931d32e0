from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from contextlib import asynccontextmanager

from app.core.config import settings
from app.core.logging import configure_logging
from app.api import certificates, geometry, numbertheory, system


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Lifespan events for the FastAPI application."""
    configure_logging()
    yield


# Create FastAPI application
app = FastAPI(
    title=settings.app_name,
    description="Traces, elliptic windows and non-discreteness certificates for complex hyperbolic (m,m,inf)-triangle groups",
    version="0.1.0",
    lifespan=lifespan
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["GET", "POST"],
    allow_headers=["*"],
)

# Include routers
app.include_router(system.router)
app.include_router(geometry.router)
app.include_router(certificates.router)
app.include_router(numbertheory.router)


@app.get("/")
async def root():
    """Root endpoint."""
    return {
        "message": settings.app_name,
        "version": "0.1.0",
        "docs": "/docs"
    }
