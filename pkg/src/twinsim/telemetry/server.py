"""Telemetry endpoint: session authority, dead-man switch, broadcasting.

Session rules:
  - handshake is mandatory: {type: hello, version, role in {viewer, driver}};
    a version mismatch is refused.
  - at most one session holds control authority (the first driver);
    later drivers are refused with the holder's id.
  - commands apply latest-wins: at most one per tick reaches the sim.
  - authority lapses after 500 ms without traffic; the command zeroes.

The network side shares exactly two artifacts with the sim loop: an
immutable latest-state snapshot (swapped per tick) and a single-slot
latest-command mailbox.
"""

from __future__ import annotations

import asyncio
import threading
from dataclasses import dataclass, field

from ..dynamics import ActuatorCommand
from . import protocol
from .protocol import ProtocolError

DEAD_MAN_TIMEOUT = 0.5  # seconds without driver traffic -> zero command


@dataclass
class _Session:
    session_id: str
    role: str
    last_seen: float = 0.0


@dataclass
class SessionManager:
    """Transport-independent session and command bookkeeping."""

    sessions: dict[str, _Session] = field(default_factory=dict)
    driver_id: str | None = None
    _command: ActuatorCommand | None = None
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def register(self, session_id: str, role: str, version: int,
                 now: float) -> tuple[bool, str]:
        """Returns (accepted, detail); detail names the holder on refusal."""
        with self._lock:
            if version != protocol.PROTOCOL_VERSION:
                return False, (f"protocol version {version} unsupported, "
                               f"server speaks {protocol.PROTOCOL_VERSION}")
            if role not in ("viewer", "driver"):
                return False, f"unknown role '{role}'"
            if role == "driver":
                if self.driver_id is not None and self.driver_id != session_id:
                    return False, f"control held by {self.driver_id}"
                self.driver_id = session_id
            self.sessions[session_id] = _Session(session_id, role, now)
            return True, role

    def unregister(self, session_id: str) -> None:
        with self._lock:
            self.sessions.pop(session_id, None)
            if self.driver_id == session_id:
                self.driver_id = None
                self._command = None

    def touch(self, session_id: str, now: float) -> None:
        with self._lock:
            if session_id in self.sessions:
                self.sessions[session_id].last_seen = now

    def submit_command(self, session_id: str, message: dict,
                       now: float) -> bool:
        """Store a driver command (latest-wins). False if not authorized."""
        with self._lock:
            if session_id != self.driver_id:
                return False
            self.sessions[session_id].last_seen = now
            self._command = ActuatorCommand(
                throttle=message["throttle"], brake=message["brake"],
                steering=message["steering"],
                handbrake=message.get("handbrake", False))
            return True

    def poll_command(self, now: float) -> ActuatorCommand:
        """Command for the next input latch; dead-man zeroes stale drivers."""
        with self._lock:
            if self.driver_id is None or self._command is None:
                return ActuatorCommand()
            session = self.sessions.get(self.driver_id)
            if session is None or now - session.last_seen > DEAD_MAN_TIMEOUT:
                self._command = None
                return ActuatorCommand()
            return self._command


class TelemetryServer:
    """Asyncio WebSocket front end over a SessionManager."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0):
        self.host = host
        self.port = port
        self.manager = SessionManager()
        self._clients: set = set()
        self._server = None
        self._loop: asyncio.AbstractEventLoop | None = None
        self._latest_state: dict | None = None
        self._latest_scan: bytes | None = None
        self._next_id = 0

    # -- sim-side API -------------------------------------------------

    def publish_state(self, state, sim_time: float) -> None:
        """Swap in the newest state snapshot (called from the sim loop)."""
        self._latest_state = protocol.make_state_frame(state, sim_time)

    def publish_scan(self, blob: bytes) -> None:
        self._latest_scan = blob

    def poll_command(self, now: float) -> ActuatorCommand:
        return self.manager.poll_command(now)

    # -- network side -------------------------------------------------

    async def start(self, state_rate_hz: float = 50.0,
                    scan_rate_hz: float = 10.0):
        import websockets

        self._loop = asyncio.get_running_loop()
        self._server = await websockets.serve(self._handle, self.host,
                                              self.port)
        self.port = self._server.sockets[0].getsockname()[1]
        self._tasks = [
            asyncio.create_task(self._broadcast_states(state_rate_hz)),
            asyncio.create_task(self._broadcast_scans(scan_rate_hz)),
        ]
        return self

    async def stop(self) -> None:
        for task in getattr(self, "_tasks", []):
            task.cancel()
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()

    async def _broadcast_states(self, rate_hz: float) -> None:
        interval = 1.0 / rate_hz
        while True:
            await asyncio.sleep(interval)
            frame = self._latest_state
            if frame is None or not self._clients:
                continue
            raw = protocol.encode_message(frame)
            await self._send_all(raw)

    async def _broadcast_scans(self, rate_hz: float) -> None:
        interval = 1.0 / rate_hz
        while True:
            await asyncio.sleep(interval)
            blob = self._latest_scan
            if blob is None or not self._clients:
                continue
            await self._send_all(blob)
            self._latest_scan = None

    async def _send_all(self, payload) -> None:
        import websockets

        stale = []
        for ws in list(self._clients):
            try:
                await ws.send(payload)
            except websockets.ConnectionClosed:
                stale.append(ws)
        for ws in stale:
            self._clients.discard(ws)

    async def _handle(self, ws) -> None:
        import websockets

        self._next_id += 1
        session_id = f"session-{self._next_id}"
        now = self._loop.time()
        try:
            raw = await ws.recv()
            try:
                hello = protocol.decode_message(raw)
            except ProtocolError as err:
                await ws.send(protocol.encode_message(
                    protocol.make_error(str(err))))
                return
            if hello["type"] != "hello":
                await ws.send(protocol.encode_message(
                    protocol.make_error("expected hello handshake")))
                return
            accepted, detail = self.manager.register(
                session_id, hello["role"], hello["version"], now)
            if not accepted:
                await ws.send(protocol.encode_message(
                    {"type": "refuse", "reason": detail}))
                return
            await ws.send(protocol.encode_message(
                {"type": "accept", "session": session_id, "role": detail}))
            self._clients.add(ws)
            async for raw in ws:
                if isinstance(raw, bytes):
                    continue  # no binary uploads defined
                now = self._loop.time()
                try:
                    message = protocol.decode_message(raw)
                except ProtocolError as err:
                    # malformed message: error frame, session preserved
                    await ws.send(protocol.encode_message(
                        protocol.make_error(str(err))))
                    continue
                self.manager.touch(session_id, now)
                if message["type"] == "command":
                    if not self.manager.submit_command(session_id, message, now):
                        await ws.send(protocol.encode_message(
                            protocol.make_error("no control authority")))
                elif message["type"] == "mode":
                    await ws.send(protocol.encode_message(
                        {"type": "ack", "mode": message["mode"]}))
        except websockets.ConnectionClosed:
            pass
        finally:
            self._clients.discard(ws)
            self.manager.unregister(session_id)
