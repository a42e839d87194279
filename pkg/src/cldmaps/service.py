"""HTTP service exposing the analysis pipeline to the analyst UI.

Endpoints (thresholds and percentages cross the wire as percents):

* ``POST /images`` -- multipart image upload -> session id + stats
* ``POST /sessions/{id}/optimize`` -> tuned threshold + quality curve
* ``GET /sessions/{id}/smap?tau=`` -> PNG
* ``GET /sessions/{id}/dmap?tau=&coverage=`` -> PNG
* ``GET /sessions/{id}/ddmap?tau=&defect_pct=`` -> PNG
* ``GET /sessions/{id}/tables?tau=&k=`` -> both percentage tables
* ``GET /sessions/{id}/cld?tau=`` -> polar diagram record

Responses are deterministic for identical inputs: 404 unknown session,
422 degenerate/unreachable requests, 400 malformed parameters.
"""

from __future__ import annotations

import io

import numpy as np
from fastapi import FastAPI, Request, Response, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from PIL import Image, UnidentifiedImageError

from . import defect, directional, serialize
from .errors import (
    CLDError,
    DegenerateCurveError,
    DegenerateImageError,
    EmptyPartitionError,
    EmptyTableError,
    NoSupportError,
    UnreachableCoverageError,
    UnreachablePercentageError,
)
from .image import to_gray
from .session import SessionStore
from .validation import check_fraction, check_tau_percent


def create_app(store: SessionStore | None = None) -> FastAPI:
    app = FastAPI(title="cldmaps")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions = store if store is not None else SessionStore()

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    def get_session(session_id: str):
        session = sessions.get(session_id)
        if session is None:
            raise _http(404, f"unknown session {session_id}")
        return session

    def parse_tau(tau: float) -> float:
        try:
            return check_tau_percent(tau)
        except ValueError as exc:
            raise _http(400, str(exc))

    @app.post("/images")
    def upload_image(file: UploadFile):
        data = file.file.read()
        try:
            with Image.open(io.BytesIO(data)) as im:
                im.load()
                if im.mode == "L":
                    arr = np.asarray(im, dtype=np.uint8)
                else:
                    arr = to_gray(np.asarray(im.convert("RGB")))
        except (UnidentifiedImageError, OSError):
            raise _http(400, "upload is not a decodable BMP/JPEG/PNG image")
        try:
            session = sessions.create(arr)
        except DegenerateImageError as exc:
            raise _http(422, str(exc))
        return {
            "session_id": session.session_id,
            "width": int(arr.shape[1]),
            "height": int(arr.shape[0]),
            "stats": {
                "mean_brightness": session.stats.mean_brightness,
                "max_abs_deviation": session.stats.max_abs_deviation,
                "tau_max": session.stats.tau_max,
            },
        }

    @app.post("/sessions/{session_id}/optimize")
    def optimize_session(session_id: str, grid: int = 64):
        session = get_session(session_id)
        try:
            result = session.optimization(grid)
        except (DegenerateImageError, DegenerateCurveError) as exc:
            raise _http(422, str(exc))
        except ValueError as exc:
            raise _http(400, str(exc))
        return {
            "tau0_percent": result.tau0 * 100.0,
            "pi_at_tau0": result.pi_at_tau0,
            "curve": serialize.quality_curve_records(result.curve),
        }

    @app.get("/sessions/{session_id}/smap")
    def smap_image(session_id: str, tau: float):
        session = get_session(session_id)
        smap = session.support_map(parse_tau(tau))
        return _png(serialize.support_map_image(smap))

    @app.get("/sessions/{session_id}/dmap")
    def dmap_image(session_id: str, tau: float, coverage: float, k: int = 10):
        session = get_session(session_id)
        tau_ratio = parse_tau(tau)
        try:
            check_fraction(coverage / 100.0, "coverage")
            table = session.coverage_table(tau_ratio, k)
            row_alpha, tau_prime = defect.resolve_coverage(table, coverage / 100.0)
        except UnreachableCoverageError as exc:
            raise _http(
                422,
                f"{exc} (attainable maximum {100.0 * exc.attainable_max:.2f}%)",
            )
        except ValueError as exc:
            raise _http(400, str(exc))
        except CLDError as exc:
            raise _http(422, str(exc))
        dmap = defect.defect_map(
            session.local(tau_ratio), session.overall(tau_ratio), tau_prime
        )
        rgb = defect.render_defect_map(dmap)
        green = float(np.count_nonzero(np.all(rgb == defect.GREEN, axis=-1)) / smap_size(rgb))
        return _png(
            serialize.rgb_image(rgb),
            headers={
                "X-Tau-Prime-Percent": repr(tau_prime * 100.0),
                "X-Row-Coverage-Percent": repr(row_alpha * 100.0),
                "X-Green-Fraction": repr(green),
            },
        )

    @app.get("/sessions/{session_id}/ddmap")
    def ddmap_image(session_id: str, tau: float, defect_pct: float, k: int = 10):
        session = get_session(session_id)
        tau_ratio = parse_tau(tau)
        try:
            table = session.defect_table(tau_ratio, k)
            row_alpha, tau_dprime = directional.resolve_defect_percentage(
                table, defect_pct / 100.0
            )
        except UnreachablePercentageError as exc:
            raise _http(422, f"{exc} (alpha_max {exc.alpha_max}%)")
        except ValueError as exc:
            raise _http(400, str(exc))
        except CLDError as exc:
            raise _http(422, str(exc))
        rgb = directional.render_directional_map(
            session.directional_map(tau_ratio), tau_dprime
        )
        return _png(
            serialize.rgb_image(rgb),
            headers={
                "X-Tau-Dprime-Percent": repr(tau_dprime * 100.0),
                "X-Row-Defect-Percent": repr(row_alpha * 100.0),
            },
        )

    @app.get("/sessions/{session_id}/tables")
    def tables(session_id: str, tau: float, k: int = 10):
        # a table that cannot exist for this image (no supported pixel,
        # or no defective pixel at any threshold) comes back null; the
        # other one stays usable
        session = get_session(session_id)
        tau_ratio = parse_tau(tau)
        try:
            try:
                h_prime = serialize.success_table_record(
                    session.coverage_table(tau_ratio, k)
                )
            except (EmptyTableError, NoSupportError):
                h_prime = None
            try:
                h_dprime = serialize.defect_table_record(
                    session.defect_table(tau_ratio, k)
                )
            except (EmptyPartitionError, EmptyTableError, NoSupportError):
                h_dprime = None
        except ValueError as exc:
            raise _http(400, str(exc))
        return {"h_prime": h_prime, "h_doubleprime": h_dprime}

    @app.get("/sessions/{session_id}/cld")
    def cld(session_id: str, tau: float):
        session = get_session(session_id)
        overall = session.overall(parse_tau(tau))
        return serialize.overall_cld_record(overall)

    return app


def smap_size(rgb: np.ndarray) -> int:
    return rgb.shape[0] * rgb.shape[1]


def _png(im, headers: dict | None = None) -> Response:
    return Response(
        content=serialize.image_png_bytes(im),
        media_type="image/png",
        headers=headers,
    )


def _http(status: int, detail: str):
    from fastapi import HTTPException

    return HTTPException(status_code=status, detail=detail)


def serve(port: int, host: str = "127.0.0.1") -> None:
    """Run the service with uvicorn (blocking)."""
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")


app = create_app()
