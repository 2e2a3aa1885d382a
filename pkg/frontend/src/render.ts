import { AXIS_LABELS, axisMargin, gaugeFraction, gaugeZone } from "./gauges.js";
import type { StateMessage } from "./protocol.js";
import type { DragMode } from "./drag.js";

const ZONE_COLORS = { safe: "#2e9e4f", boundary: "#e0a800", violation: "#d63333" };

// Ring buffer of |w_i| samples for the time-series strip.
export class StripBuffer {
  readonly capacity: number;
  private rows: number[][] = [];
  private lastTick = -1;

  constructor(capacity = 300) {
    this.capacity = capacity;
  }

  push(state: StateMessage): void {
    if (state.tick === this.lastTick) return;
    this.lastTick = state.tick;
    this.rows.push(state.compensated_wrench.map(Math.abs));
    if (this.rows.length > this.capacity) this.rows.shift();
  }

  samples(): number[][] {
    return this.rows;
  }
}

// Scene: x right, z up, a slice of the workspace around the home pose.
export function drawScene(
  ctx: CanvasRenderingContext2D,
  state: StateMessage | null,
  target: { x: number; z: number } | null,
  drag: { dx: number; dy: number; mode: DragMode } | null,
): void {
  const { width: W, height: H } = ctx.canvas;
  ctx.clearRect(0, 0, W, H);
  ctx.fillStyle = "#10141a";
  ctx.fillRect(0, 0, W, H);

  const scale = 150; // px per metre
  const toPx = (x: number, z: number) => ({
    px: W / 2 + (x - 0.5) * scale,
    py: H / 2 - (z - 1.0) * scale,
  });

  // metre grid
  ctx.strokeStyle = "#222a33";
  ctx.lineWidth = 1;
  for (let gx = -2; gx <= 3; gx++) {
    const { px } = toPx(gx, 0);
    ctx.beginPath();
    ctx.moveTo(px, 0);
    ctx.lineTo(px, H);
    ctx.stroke();
  }
  for (let gz = -1; gz <= 3; gz++) {
    const { py } = toPx(0, gz);
    ctx.beginPath();
    ctx.moveTo(0, py);
    ctx.lineTo(W, py);
    ctx.stroke();
  }

  if (target) {
    const { px, py } = toPx(target.x, target.z);
    ctx.strokeStyle = "#4f8cd6";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.moveTo(px - 8, py);
    ctx.lineTo(px + 8, py);
    ctx.moveTo(px, py - 8);
    ctx.lineTo(px, py + 8);
    ctx.stroke();
  }

  if (!state) return;
  const [x, , z] = state.pose.position;
  const { px, py } = toPx(x, z);

  // end effector
  ctx.fillStyle = "#d8dee6";
  ctx.fillRect(px - 7, py - 7, 14, 14);
  ctx.strokeStyle = "#6c7a89";
  ctx.strokeRect(px - 7, py - 7, 14, 14);

  if (drag) {
    ctx.strokeStyle = drag.mode === "force" ? "#e07830" : "#b06ae0";
    ctx.lineWidth = 2.5;
    if (drag.mode === "force") {
      // straight arrow along the drag vector
      ctx.beginPath();
      ctx.moveTo(px, py);
      ctx.lineTo(px + drag.dx, py + drag.dy);
      ctx.stroke();
      const ang = Math.atan2(drag.dy, drag.dx);
      ctx.beginPath();
      ctx.moveTo(px + drag.dx, py + drag.dy);
      ctx.lineTo(px + drag.dx - 9 * Math.cos(ang - 0.4), py + drag.dy - 9 * Math.sin(ang - 0.4));
      ctx.moveTo(px + drag.dx, py + drag.dy);
      ctx.lineTo(px + drag.dx - 9 * Math.cos(ang + 0.4), py + drag.dy - 9 * Math.sin(ang + 0.4));
      ctx.stroke();
    } else {
      // torque: arc arrow, radius from drag magnitude
      const r = 18 + Math.hypot(drag.dx, drag.dy) / 4;
      const sweep = Math.sign(drag.dx || 1) * Math.min(1.4, Math.hypot(drag.dx, drag.dy) / 80 + 0.3);
      ctx.beginPath();
      ctx.arc(px, py, r, -Math.PI / 2, -Math.PI / 2 + sweep, sweep < 0);
      ctx.stroke();
    }
  }
}

// Six horizontal margin gauges: fill is |w|/limit, color from the h zone,
// the printed number is h itself.
export function drawGauges(ctx: CanvasRenderingContext2D, wrench: number[], limits: number[]): void {
  const { width: W, height: H } = ctx.canvas;
  ctx.clearRect(0, 0, W, H);
  ctx.fillStyle = "#10141a";
  ctx.fillRect(0, 0, W, H);
  const rowH = H / 6;
  ctx.font = "12px monospace";
  for (let i = 0; i < 6; i++) {
    const h = axisMargin(wrench[i], limits[i]);
    const frac = gaugeFraction(h, limits[i]);
    const zone = gaugeZone(h, limits[i]);
    const y = i * rowH + 4;
    const barW = W - 150;
    ctx.fillStyle = "#222a33";
    ctx.fillRect(40, y, barW, rowH - 8);
    ctx.fillStyle = ZONE_COLORS[zone];
    ctx.fillRect(40, y, Math.min(1.2, frac) / 1.2 * barW, rowH - 8);
    // the limit sits at 1/1.2 of the bar
    const lx = 40 + barW / 1.2;
    ctx.strokeStyle = "#d8dee6";
    ctx.beginPath();
    ctx.moveTo(lx, y);
    ctx.lineTo(lx, y + rowH - 8);
    ctx.stroke();
    ctx.fillStyle = "#d8dee6";
    ctx.fillText(AXIS_LABELS[i], 8, y + rowH / 2);
    ctx.fillText(`h=${h.toFixed(1)}`, 40 + barW + 8, y + rowH / 2);
  }
}

// |w_i| traces against their limits, most recent sample at the right edge.
export function drawStrip(ctx: CanvasRenderingContext2D, strip: StripBuffer, limits: number[]): void {
  const { width: W, height: H } = ctx.canvas;
  ctx.clearRect(0, 0, W, H);
  ctx.fillStyle = "#10141a";
  ctx.fillRect(0, 0, W, H);
  const rows = strip.samples();
  if (!rows.length) return;
  const maxLimit = Math.max(...limits, 1e-9);
  const yOf = (v: number) => H - (v / (1.5 * maxLimit)) * H;
  ctx.strokeStyle = "#555";
  ctx.setLineDash([4, 4]);
  ctx.beginPath();
  ctx.moveTo(0, yOf(maxLimit));
  ctx.lineTo(W, yOf(maxLimit));
  ctx.stroke();
  ctx.setLineDash([]);
  const colors = ["#e05c5c", "#5ce05c", "#5c8ce0", "#e0a85c", "#a85ce0", "#5ce0d0"];
  for (let i = 0; i < 6; i++) {
    ctx.strokeStyle = colors[i];
    ctx.lineWidth = 1;
    ctx.beginPath();
    rows.forEach((row, j) => {
      const px = W - (rows.length - 1 - j) * (W / strip.capacity);
      const py = yOf(row[i]);
      if (j === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.stroke();
  }
}
