import logging

from fastapi import FastAPI

from app.core.config import settings
from app.api import routes_functions, routes_two_step

# Configure logging
logging.basicConfig(
    level=settings.LOG_LEVEL,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)

app = FastAPI(
    title="Auxiliary Function Bound API",
    description="Certify auxiliary functions and compute integrality-ratio bounds",
    version="0.1.0",
)


@app.get("/health")
def health_check():
    """Health check endpoint"""
    return {"status": "ok"}


# Include routers
app.include_router(routes_functions.router, prefix=settings.API_V1_PREFIX)
app.include_router(routes_two_step.router, prefix=settings.API_V1_PREFIX)


@app.get("/")
def root():
    """Root endpoint"""
    return {
        "message": "Auxiliary Function Bound API",
        "version": "0.1.0",
        "docs": "/docs",
    }
