/**
 * Top-down scene geometry and canvas rendering.
 *
 * All world-to-screen mapping is a single exact affine transform (pan,
 * zoom, y-flip); rendered world coordinates equal the wire-frame values —
 * the client never smooths positions.
 */

import { Pose, StateFrame } from "./protocol";
import { MapAccumulator, UiSession } from "./session";

export interface View {
  centerX: number; // world coordinates at the canvas centre
  centerY: number;
  scale: number; // pixels per metre
  width: number; // canvas size, px
  height: number;
}

export function worldToScreen(view: View, x: number, y: number): [number, number] {
  return [
    view.width / 2 + (x - view.centerX) * view.scale,
    view.height / 2 - (y - view.centerY) * view.scale,
  ];
}

export function zoom(view: View, factor: number): View {
  return { ...view, scale: view.scale * factor };
}

export function pan(view: View, dxWorld: number, dyWorld: number): View {
  return { ...view, centerX: view.centerX + dxWorld, centerY: view.centerY + dyWorld };
}

/** Yaw about +z from a (w, x, y, z) quaternion. */
export function yawFromQuat(quat: readonly number[]): number {
  const [w, x, y, z] = quat;
  return Math.atan2(2 * (w * z + x * y), 1 - 2 * (y * y + z * z));
}

/** World-frame endpoints of the finite beams of a planar scan. */
export function scanToWorldPoints(
  pose: Pose,
  angles: readonly number[],
  ranges: ArrayLike<number>,
): Array<[number, number]> {
  const yaw = yawFromQuat(pose.quat);
  const points: Array<[number, number]> = [];
  for (let i = 0; i < angles.length && i < ranges.length; i += 1) {
    const r = ranges[i];
    if (!Number.isFinite(r)) continue;
    const a = yaw + angles[i];
    points.push([pose.x + r * Math.cos(a), pose.y + r * Math.sin(a)]);
  }
  return points;
}

/** Evenly spaced beam angles, matching the scanner's layout. */
export function beamAngles(thetaMin: number, thetaRes: number, count: number): number[] {
  return Array.from({ length: count }, (_, i) => thetaMin + i * thetaRes);
}

/** Footprint corners (world frame, counter-clockwise from front-left). */
export function vehicleOutline(
  pose: Pose,
  length: number,
  width: number,
): Array<[number, number]> {
  const yaw = yawFromQuat(pose.quat);
  const c = Math.cos(yaw);
  const s = Math.sin(yaw);
  const hl = length / 2;
  const hw = width / 2;
  const local: Array<[number, number]> = [
    [hl, hw],
    [-hl, hw],
    [-hl, -hw],
    [hl, -hw],
  ];
  return local.map(([lx, ly]) => [
    pose.x + c * lx - s * ly,
    pose.y + s * lx + c * ly,
  ]);
}

/** The structural subset of CanvasRenderingContext2D the renderer uses. */
export interface Canvas2dLike {
  fillStyle: string | object;
  strokeStyle: string | object;
  lineWidth: number;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  stroke(): void;
  fill(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
}

export interface SceneConfig {
  vehicleLength: number;
  vehicleWidth: number;
  scanAngles: readonly number[];
  map?: MapAccumulator;
}

function drawPolyline(
  ctx: Canvas2dLike,
  view: View,
  points: Array<[number, number]>,
  close: boolean,
): void {
  if (points.length === 0) return;
  ctx.beginPath();
  const [x0, y0] = worldToScreen(view, points[0][0], points[0][1]);
  ctx.moveTo(x0, y0);
  for (const [x, y] of points.slice(1)) {
    const [px, py] = worldToScreen(view, x, y);
    ctx.lineTo(px, py);
  }
  if (close) ctx.closePath();
  ctx.stroke();
}

/** Draw the whole scene from session state; pure function of its inputs. */
export function renderScene(
  ctx: Canvas2dLike,
  session: UiSession,
  view: View,
  config: SceneConfig,
): void {
  ctx.fillStyle = "#111";
  ctx.fillRect(0, 0, view.width, view.height);

  const map = config.map;
  if (map !== undefined) {
    ctx.fillStyle = "#888";
    const cellPx = map.resolution * view.scale;
    for (let row = 0; row < map.height; row += 1) {
      for (let col = 0; col < map.width; col += 1) {
        if (map.hits[row * map.width + col] === 0) continue;
        const [px, py] = worldToScreen(
          view,
          map.originX + col * map.resolution,
          map.originY + (row + 1) * map.resolution,
        );
        ctx.fillRect(px, py, cellPx, cellPx);
      }
    }
  }

  const state: StateFrame | null = session.lastState;
  if (state === null) return;

  if (session.lastScan !== null) {
    ctx.fillStyle = "#e33";
    const points = scanToWorldPoints(
      state.pose,
      config.scanAngles,
      session.lastScan.ranges,
    );
    for (const [x, y] of points) {
      const [px, py] = worldToScreen(view, x, y);
      ctx.beginPath();
      ctx.arc(px, py, 1.5, 0, 2 * Math.PI);
      ctx.fill();
    }
  }

  if (session.waypoints.points.length > 1) {
    ctx.strokeStyle = "#3c3";
    ctx.lineWidth = 1;
    drawPolyline(
      ctx,
      view,
      session.waypoints.points.map((p) => [p.x, p.y]),
      false,
    );
  }

  ctx.strokeStyle = "#39f";
  ctx.lineWidth = 2;
  drawPolyline(
    ctx,
    view,
    vehicleOutline(state.pose, config.vehicleLength, config.vehicleWidth),
    true,
  );
}
