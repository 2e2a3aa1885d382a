import { CommandSource, DragMode, dragToWrench, WrenchStream } from "./drag.js";
import { drawGauges, drawScene, drawStrip, StripBuffer } from "./render.js";
import { UiSessionState } from "./session.js";
import { connectTeleop, TeleopSocket } from "./socket.js";

// Configuration comes from URL query parameters only:
//   ?server=127.0.0.1:8765&gain=0.1
const params = new URLSearchParams(location.search);
const SERVER = params.get("server") ?? "127.0.0.1:8765";
const GAIN = Number(params.get("gain") ?? "0.1"); // N per pixel
const GAINS = { newtonsPerPixel: GAIN, torquePerPixel: GAIN / 10 };

const sceneCanvas = document.getElementById("scene") as HTMLCanvasElement;
const gaugeCanvas = document.getElementById("gauges") as HTMLCanvasElement;
const stripCanvas = document.getElementById("strip") as HTMLCanvasElement;
const statusEl = document.getElementById("status")!;
const errorEl = document.getElementById("error")!;
const pauseBtn = document.getElementById("pause") as HTMLButtonElement;
const resetBtn = document.getElementById("reset") as HTMLButtonElement;
const limitsForm = document.getElementById("limits-form") as HTMLFormElement;

const session = new UiSessionState();
const source = new CommandSource(`ui-${Math.random().toString(36).slice(2, 8)}`);
const stream = new WrenchStream();
const strip = new StripBuffer();

let socket: TeleopSocket | null = null;
let paused = false;
let drag: { startX: number; startY: number; dx: number; dy: number; mode: DragMode } | null = null;
let limitsFilled = false;

function connect(): void {
  session.status = "connecting";
  socket = connectTeleop(SERVER, {
    onOpen: () => session.onOpen(),
    onClose: () => {
      session.onClose();
      socket = null;
      setTimeout(connect, 1000); // sequence numbers survive the reconnect
    },
    onMessage: (msg) => {
      session.onMessage(msg, performance.now());
      if (msg && msg.type === "state") {
        strip.push(msg);
        // at most one apply_wrench per server tick
        const live = drag ? dragToWrench(drag.dx, drag.dy, drag.mode, GAINS) : null;
        const wrench = stream.wrenchFor(msg.tick, live, session.envelope());
        if (wrench !== null && socket) {
          const cmd = source.next("apply_wrench", { wrench });
          socket.send(cmd);
          session.lastSent = wrench;
        }
        session.liveDrag = live;
      }
      if (msg && msg.type === "hello" && !limitsFilled) {
        fillLimitsForm(msg.limits);
        limitsFilled = true;
      }
    },
  });
}

// -- pointer gestures ---------------------------------------------------------
sceneCanvas.addEventListener("pointerdown", (ev) => {
  sceneCanvas.setPointerCapture(ev.pointerId);
  drag = {
    startX: ev.offsetX,
    startY: ev.offsetY,
    dx: 0,
    dy: 0,
    mode: ev.shiftKey ? "torque" : "force",
  };
});
sceneCanvas.addEventListener("pointermove", (ev) => {
  if (!drag) return;
  drag.dx = ev.offsetX - drag.startX;
  drag.dy = ev.offsetY - drag.startY;
});
function release(): void {
  if (!drag) return;
  drag = null;
  session.liveDrag = null;
  stream.onRelease(); // a zero wrench goes out on the next tick
}
sceneCanvas.addEventListener("pointerup", release);
sceneCanvas.addEventListener("pointercancel", release);

// double-click moves the target in the scene plane (y keeps its current value)
sceneCanvas.addEventListener("dblclick", (ev) => {
  if (!socket || !session.state) return;
  const x = 0.5 + (ev.offsetX - sceneCanvas.width / 2) / 150;
  const z = 1.0 - (ev.offsetY - sceneCanvas.height / 2) / 150;
  const position = [x, session.state.pose.position[1], z];
  socket.send(source.next("set_target", { pose: { position } }));
  target = { x, z };
});
let target: { x: number; z: number } | null = null;

// -- controls -----------------------------------------------------------------
pauseBtn.addEventListener("click", () => {
  if (!socket) return;
  paused = !paused;
  socket.send(source.next("pause", { paused }));
  pauseBtn.textContent = paused ? "resume" : "pause";
});
resetBtn.addEventListener("click", () => {
  if (!socket) return;
  socket.send(source.next("reset", {}));
  paused = false;
  pauseBtn.textContent = "pause";
});

function fillLimitsForm(limits: number[]): void {
  limits.forEach((v, i) => {
    (limitsForm.elements.namedItem(`lim${i}`) as HTMLInputElement).value = String(v);
  });
}
limitsForm.addEventListener("submit", (ev) => {
  ev.preventDefault();
  if (!socket) return;
  const limits = Array.from({ length: 6 }, (_, i) =>
    Number((limitsForm.elements.namedItem(`lim${i}`) as HTMLInputElement).value),
  );
  if (limits.every((v) => Number.isFinite(v) && v >= 0)) {
    socket.send(source.next("set_limits", { limits }));
  }
});

// -- render loop ----------------------------------------------------------------
function frame(): void {
  const now = performance.now();
  const stale = session.isStale(now);
  const badge =
    session.status !== "open"
      ? session.status
      : stale
        ? "STALE — no fresh state"
        : `tick ${session.state?.tick ?? "-"} · t=${session.state?.t.toFixed(2) ?? "-"} s`;
  statusEl.textContent = `${SERVER} · ${badge}`;
  statusEl.className = session.status === "open" && !stale ? "ok" : "warn";
  errorEl.textContent = session.lastError
    ? `server: ${session.lastError}`
    : session.badFrames
      ? `${session.badFrames} malformed frame(s) skipped`
      : "";

  const sctx = sceneCanvas.getContext("2d")!;
  drawScene(sctx, session.state, target, drag ? { dx: drag.dx, dy: drag.dy, mode: drag.mode } : null);
  const limits = session.limits();
  drawGauges(gaugeCanvas.getContext("2d")!, session.state?.compensated_wrench ?? [0, 0, 0, 0, 0, 0], limits);
  drawStrip(stripCanvas.getContext("2d")!, strip, limits);
  requestAnimationFrame(frame);
}

connect();
requestAnimationFrame(frame);
