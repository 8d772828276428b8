/**
 * Wire protocol codec: compact JSON text frames plus binary scan frames.
 *
 * Mirrors the server encoding exactly: keys sorted, no whitespace, every
 * message carries the protocol version. Binary scan frames start with the
 * "TWSC" magic followed by little-endian u32 count and frame id, then
 * float32 ranges where `rMax + 1` marks a miss.
 */

export const PROTOCOL_VERSION = 1;

export const TEXT_TYPES = [
  "hello",
  "accept",
  "refuse",
  "state",
  "map_meta",
  "command",
  "mode",
  "ack",
  "error",
] as const;

export type MessageType = (typeof TEXT_TYPES)[number];
export type Role = "viewer" | "driver";

const REQUIRED: Partial<Record<MessageType, readonly string[]>> = {
  hello: ["role"],
  refuse: ["reason"],
  state: ["tick"],
  command: ["throttle", "brake", "steering"],
  mode: ["mode"],
  error: ["reason"],
};

export interface WireMessage {
  type: MessageType;
  version: number;
  [key: string]: unknown;
}

export interface Pose {
  x: number;
  y: number;
  z: number;
  quat: [number, number, number, number]; // w, x, y, z
}

export interface StateFrame extends WireMessage {
  type: "state";
  tick: number;
  time: number;
  pose: Pose;
  velocity: number[];
  omega: number;
  steering: number;
  gear: number;
  rpm: number;
  wheel_speeds: number[];
  throttle: number;
  brake: number;
  collided: boolean;
}

export interface CommandMessage extends WireMessage {
  type: "command";
  throttle: number;
  brake: number;
  steering: number;
  handbrake: boolean;
}

export class ProtocolError extends Error {}

/** JSON.stringify with recursively sorted object keys (compact). */
function stableStringify(value: unknown): string {
  if (value === null || typeof value !== "object") {
    if (typeof value === "number" && !Number.isFinite(value)) {
      throw new ProtocolError("non-finite number in message");
    }
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return `[${value.map(stableStringify).join(",")}]`;
  }
  const entries = Object.entries(value as Record<string, unknown>)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([k, v]) => `${JSON.stringify(k)}:${stableStringify(v)}`);
  return `{${entries.join(",")}}`;
}

export function encodeMessage(message: {
  type: MessageType;
  [key: string]: unknown;
}): string {
  if (!TEXT_TYPES.includes(message.type)) {
    throw new ProtocolError(`unknown message type: ${String(message.type)}`);
  }
  const payload: Record<string, unknown> = { version: PROTOCOL_VERSION, ...message };
  return stableStringify(payload);
}

export function decodeMessage(raw: string): WireMessage {
  let message: unknown;
  try {
    message = JSON.parse(raw);
  } catch (err) {
    throw new ProtocolError(`not valid JSON: ${String(err)}`);
  }
  if (message === null || typeof message !== "object" || Array.isArray(message)) {
    throw new ProtocolError("message must be an object");
  }
  const obj = message as Record<string, unknown>;
  const kind = obj["type"] as MessageType;
  if (!TEXT_TYPES.includes(kind)) {
    throw new ProtocolError(`unknown message type: ${String(obj["type"])}`);
  }
  if (!("version" in obj)) {
    throw new ProtocolError("missing version field");
  }
  for (const field of REQUIRED[kind] ?? []) {
    if (!(field in obj)) {
      throw new ProtocolError(`${kind} message missing field '${field}'`);
    }
  }
  return obj as WireMessage;
}

export function makeHello(role: Role): WireMessage {
  return { type: "hello", version: PROTOCOL_VERSION, role };
}

export function makeCommand(
  throttle = 0,
  brake = 0,
  steering = 0,
  handbrake = false,
): CommandMessage {
  return {
    type: "command",
    version: PROTOCOL_VERSION,
    throttle,
    brake,
    steering,
    handbrake,
  };
}

export function makeMode(mode: string): WireMessage {
  return { type: "mode", version: PROTOCOL_VERSION, mode };
}

export const SCAN_MAGIC = "TWSC";

export interface ScanFrame {
  frameId: number;
  /** Range per beam; misses decoded to Infinity when `rMax` is known. */
  ranges: Float32Array;
}

export function decodeScanFrame(buffer: ArrayBuffer, rMax?: number): ScanFrame {
  const view = new DataView(buffer);
  if (buffer.byteLength < 12) {
    throw new ProtocolError("scan frame too short");
  }
  const magic = String.fromCharCode(
    view.getUint8(0),
    view.getUint8(1),
    view.getUint8(2),
    view.getUint8(3),
  );
  if (magic !== SCAN_MAGIC) {
    throw new ProtocolError(`bad scan magic: ${magic}`);
  }
  const count = view.getUint32(4, true);
  const frameId = view.getUint32(8, true);
  if (buffer.byteLength < 12 + 4 * count) {
    throw new ProtocolError("scan frame payload truncated");
  }
  const ranges = new Float32Array(count);
  for (let i = 0; i < count; i += 1) {
    const value = view.getFloat32(12 + 4 * i, true);
    ranges[i] = rMax !== undefined && value > rMax ? Infinity : value;
  }
  return { frameId, ranges };
}
