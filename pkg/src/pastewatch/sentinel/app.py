"""HTTP/JSON face of the paste-watching service. Every request first
lets the service process due queue items against the injected clock, so
no background thread is needed."""

from __future__ import annotations

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from ..errors import (InvalidState, NameCollision, NotExtractable,
                      UnknownFile)
from .core import PasteEvent, SentinelService


class RegisterFileBody(BaseModel):
    content: str


class EditBody(BaseModel):
    start: int
    end: int
    text: str


class PasteBody(BaseModel):
    text: str
    offset: int


class ApplyBody(BaseModel):
    name: str


def create_app(service: SentinelService) -> FastAPI:
    app = FastAPI(title="pastewatch sentinel")
    app.state.service = service

    def tick():
        service.evaluate_due(service.clock())

    @app.exception_handler(UnknownFile)
    async def _unknown_file(request: Request, exc: UnknownFile):
        return JSONResponse(status_code=404,
                            content={"error": exc.code, "detail": str(exc)})

    @app.exception_handler(InvalidState)
    async def _invalid_state(request: Request, exc: InvalidState):
        return JSONResponse(status_code=409,
                            content={"error": exc.code, "detail": str(exc)})

    @app.exception_handler(NotExtractable)
    async def _not_extractable(request: Request, exc: NotExtractable):
        return JSONResponse(status_code=422,
                            content={"error": exc.code, "detail": str(exc),
                                     "reason": exc.reason})

    @app.exception_handler(NameCollision)
    async def _name_collision(request: Request, exc: NameCollision):
        return JSONResponse(status_code=422,
                            content={"error": exc.code, "detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400,
                            content={"error": "BAD_REQUEST",
                                     "detail": str(exc)})

    @app.post("/files")
    def register_file(body: RegisterFileBody):
        tick()
        return {"fileId": service.register_file(body.content)}

    @app.get("/files/{file_id}")
    def get_file(file_id: str):
        tick()
        return {"fileId": file_id, "content": service.file_content(file_id)}

    @app.post("/files/{file_id}/edit")
    def edit_file(file_id: str, body: EditBody):
        service.edit(file_id, body.start, body.end, body.text)
        tick()
        return {"ok": True, "content": service.file_content(file_id)}

    @app.post("/files/{file_id}/copy")
    def copy_event(file_id: str):
        service._file(file_id)  # 404 on unknown file
        service.record_copy()
        tick()
        return service.counters.to_dict()

    @app.post("/files/{file_id}/paste")
    def paste_event(file_id: str, body: PasteBody):
        result = service.enqueue_paste(PasteEvent(
            file_id=file_id, text=body.text, offset=body.offset,
            timestamp=service.clock()))
        tick()
        return result

    @app.get("/recommendations")
    def recommendations():
        tick()
        return {"recommendations": [r.to_dict()
                                    for r in service.shown_recommendations()]}

    @app.post("/recommendations/{rec_id}/apply")
    def apply_recommendation(rec_id: str, body: ApplyBody):
        tick()
        return service.apply(rec_id, body.name)

    @app.post("/recommendations/{rec_id}/cancel")
    def cancel_recommendation(rec_id: str):
        tick()
        service.cancel(rec_id)
        return {"ok": True}

    @app.get("/counters")
    def counters():
        tick()
        return service.counters.to_dict()

    @app.get("/counters.xml")
    def counters_xml():
        tick()
        return Response(content=service.counters_xml(),
                        media_type="application/xml")

    @app.get("/settings")
    def settings():
        s = service.settings
        return {"cloneThreshold": s.clone_threshold, "delayMs": s.delay_ms,
                "expiryMs": s.expiry_ms,
                "decisionThreshold": s.decision_threshold}

    return app
