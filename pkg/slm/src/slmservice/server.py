"""HTTP serving: POST /predict over a shared read-only model, GET /health."""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .predict import LoadedModel, load_model, predict
from .records import DistillRecord, SlmPrediction

logger = logging.getLogger(__name__)


def create_app(model_dir: str | None = None) -> FastAPI:
    """App factory; the model loads at startup when a directory is given."""

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if app.state.model_dir is not None:
            app.state.model = load_model(app.state.model_dir)
            logger.info("model loaded from %s", app.state.model_dir)
        yield

    app = FastAPI(title="slm-service", version="0.1.0", lifespan=lifespan)
    app.state.model = None
    app.state.model_dir = model_dir

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        fields = sorted(
            {str(err["loc"][-1]) for err in exc.errors() if err.get("loc")}
        )
        return JSONResponse(
            status_code=400,
            content={"detail": f"schema violation in field(s): {fields}", "errors": exc.errors()},
        )

    @app.get("/health")
    async def health():
        loaded: LoadedModel | None = app.state.model
        body = {"status": "ok" if loaded else "loading", "model_loaded": loaded is not None}
        if loaded:
            body["encoder"] = loaded.encoder
            body["max_length"] = loaded.max_length
            body["labels"] = ["REAL", "FAKE"]
        return JSONResponse(status_code=200 if loaded else 503, content=body)

    @app.post("/predict", response_model=list[SlmPrediction])
    async def predict_endpoint(records: list[DistillRecord]):
        loaded: LoadedModel | None = app.state.model
        if loaded is None:
            return JSONResponse(status_code=503, content={"detail": "model not loaded yet"})
        return predict(records, loaded)

    return app
