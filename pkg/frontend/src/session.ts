/**
 * Client-side session state.
 *
 * Everything rendered originates from wire frames: state frames are stored
 * verbatim (no smoothing), the waypoint overlay is derived from state-frame
 * poses with the same spacing rule the recorder applies, and the map
 * overlay accumulates scan endpoints into a coarse hit grid.
 */

import { ScanFrame, StateFrame, WireMessage } from "./protocol";

export type ConnectionStatus =
  | "disconnected"
  | "connecting"
  | "welcomed"
  | "refused";

export interface Waypoint {
  x: number;
  y: number;
  speed: number;
}

/** Mirrors the recorder's arithmetic: keep poses at least `spacing` apart. */
export class WaypointOverlay {
  readonly points: Waypoint[] = [];

  constructor(readonly spacing: number) {
    if (spacing <= 0) throw new Error("waypoint spacing must be > 0");
  }

  push(x: number, y: number, speed: number): boolean {
    const last = this.points[this.points.length - 1];
    if (last !== undefined && Math.hypot(x - last.x, y - last.y) < this.spacing) {
      return false;
    }
    this.points.push({ x, y, speed });
    return true;
  }

  clear(): void {
    this.points.length = 0;
  }
}

/** Coarse occupancy-evidence grid built from scan endpoints, for display. */
export class MapAccumulator {
  readonly hits: Uint16Array;

  constructor(
    readonly width: number,
    readonly height: number,
    readonly resolution: number,
    readonly originX: number,
    readonly originY: number,
  ) {
    this.hits = new Uint16Array(width * height);
  }

  addPoint(x: number, y: number): void {
    const col = Math.floor((x - this.originX) / this.resolution);
    const row = Math.floor((y - this.originY) / this.resolution);
    if (col < 0 || col >= this.width || row < 0 || row >= this.height) return;
    const idx = row * this.width + col;
    if (this.hits[idx] < 0xffff) this.hits[idx] += 1;
  }
}

export class UiSession {
  status: ConnectionStatus = "disconnected";
  sessionId: string | null = null;
  role: string | null = null;
  /** True only while this session holds driver control. */
  authority = false;
  refusalReason: string | null = null;
  lastError: string | null = null;
  mode: string | null = null;
  lastState: StateFrame | null = null;
  lastScan: ScanFrame | null = null;

  recording = false;
  waypoints: WaypointOverlay;

  constructor(recordSpacing = 0.16) {
    this.waypoints = new WaypointOverlay(recordSpacing);
  }

  startRecording(): void {
    this.waypoints.clear();
    this.recording = true;
  }

  stopRecording(): void {
    this.recording = false;
  }

  handleMessage(message: WireMessage): void {
    switch (message.type) {
      case "accept":
        this.status = "welcomed";
        this.sessionId = (message["session"] as string) ?? null;
        this.role = (message["role"] as string) ?? null;
        this.authority = this.role === "driver";
        break;
      case "refuse":
        this.status = "refused";
        this.authority = false;
        this.refusalReason = message["reason"] as string;
        break;
      case "state":
        this.handleState(message as StateFrame);
        break;
      case "ack":
        if (typeof message["mode"] === "string") {
          this.mode = message["mode"];
        }
        break;
      case "error":
        this.lastError = message["reason"] as string;
        break;
      default:
        break;
    }
  }

  handleScan(frame: ScanFrame): void {
    this.lastScan = frame;
  }

  private handleState(frame: StateFrame): void {
    this.lastState = frame;
    if (this.recording) {
      const speed = Math.hypot(frame.velocity[0] ?? 0, frame.velocity[1] ?? 0);
      this.waypoints.push(frame.pose.x, frame.pose.y, speed);
    }
  }
}
