import init, { Simulation } from "./pkg/qflow_demo.js";

const field = document.getElementById("field");
const energyCanvas = document.getElementById("energy");
const stats = document.getElementById("stats");
const runButton = document.getElementById("run");
const dtInput = document.getElementById("dt");
const dtLabel = document.getElementById("dt-value");

let sim;
let running = false;
let trace = [];
let mesh;

const kind = () => document.querySelector("input[name=kind]:checked").value;
const dt = () => Math.pow(10, Number(dtInput.value));
const toCanvas = ([x, y]) => [(x + 1.05) / 2.1 * field.width, (1.05 - y) / 2.1 * field.height];
const fromCanvas = (px, py) => [px / field.width * 2.1 - 1.05, 1.05 - py / field.height * 2.1];

// Viridis-like ramp through five stops.
const STOPS = [[68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37]];
function colour(t) {
  const s = Math.min(Math.max(t, 0), 1) * (STOPS.length - 1);
  const i = Math.min(Math.floor(s), STOPS.length - 2);
  const f = s - i;
  const c = STOPS[i].map((v, k) => Math.round(v + f * (STOPS[i + 1][k] - v)));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

function drawField() {
  const ctx = field.getContext("2d");
  ctx.clearRect(0, 0, field.width, field.height);
  const lambda = sim.lambda_plus();
  const dirs = sim.directors();
  const scale = sim.nematic_order();
  const { xy, tri } = mesh;
  for (let e = 0; e < tri.length; e += 3) {
    const v = [tri[e], tri[e + 1], tri[e + 2]];
    const mean = (lambda[v[0]] + lambda[v[1]] + lambda[v[2]]) / 3;
    ctx.fillStyle = colour(mean / scale);
    ctx.strokeStyle = ctx.fillStyle;
    ctx.beginPath();
    v.forEach((n, k) => {
      const [px, py] = toCanvas([xy[2 * n], xy[2 * n + 1]]);
      k === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
    });
    ctx.closePath();
    ctx.fill();
    ctx.stroke();
  }
  ctx.strokeStyle = "#fff";
  ctx.lineWidth = 1.2;
  const len = 7;
  for (let n = 0; n < lambda.length; n += 3) {
    if (lambda[n] < 0.1 * scale) continue;
    const [px, py] = toCanvas([xy[2 * n], xy[2 * n + 1]]);
    const [dx, dy] = [dirs[2 * n] * len, -dirs[2 * n + 1] * len];
    ctx.beginPath();
    ctx.moveTo(px - dx, py - dy);
    ctx.lineTo(px + dx, py + dy);
    ctx.stroke();
  }
}

function drawEnergy() {
  const ctx = energyCanvas.getContext("2d");
  const { width, height } = energyCanvas;
  ctx.clearRect(0, 0, width, height);
  if (trace.length < 2) return;
  const ts = trace.map((p) => p[0]);
  const es = trace.map((p) => p[1]);
  const [t0, t1] = [ts[0], ts[ts.length - 1] || 1];
  const [lo, hi] = [Math.min(...es), Math.max(...es)];
  const pad = 24;
  const x = (t) => pad + (t - t0) / (t1 - t0 || 1) * (width - 2 * pad);
  const y = (e) => height - pad - (e - lo) / (hi - lo || 1) * (height - 2 * pad);
  ctx.strokeStyle = "#1f77b4";
  ctx.beginPath();
  trace.forEach(([t, e], k) => (k === 0 ? ctx.moveTo(x(t), y(e)) : ctx.lineTo(x(t), y(e))));
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.font = "11px monospace";
  ctx.fillText(`F ${hi.toExponential(3)}`, 2, 12);
  ctx.fillText(`F ${lo.toExponential(3)}`, 2, height - 4);
}

function refresh(iters) {
  drawField();
  drawEnergy();
  stats.textContent =
    `t        ${sim.time().toFixed(2)}\n` +
    `energy   ${sim.energy().toExponential(6)}\n` +
    `defects  ${sim.defect_count()}\n` +
    (iters === undefined ? "" : `fp iters ${iters}`);
}

function record() {
  trace.push([sim.time(), sim.energy()]);
}

function frame() {
  if (!running) return;
  const n = Math.max(1, Number(document.getElementById("per-frame").value) | 0);
  try {
    const iters = sim.step(n);
    record();
    refresh(iters);
    requestAnimationFrame(frame);
  } catch (err) {
    running = false;
    runButton.textContent = "Run";
    stats.textContent += `\n${err}`;
  }
}

function reset() {
  sim.reset(kind());
  trace = [];
  record();
  refresh();
}

async function main() {
  await init();
  dtLabel.textContent = dt().toExponential(1);
  sim = new Simulation(kind(), dt());
  mesh = { xy: sim.nodes(), tri: sim.triangles() };
  record();
  refresh();

  document.getElementById("reset").addEventListener("click", reset);
  document.querySelectorAll("input[name=kind]").forEach((r) => r.addEventListener("change", reset));
  runButton.addEventListener("click", () => {
    running = !running;
    runButton.textContent = running ? "Pause" : "Run";
    if (running) requestAnimationFrame(frame);
  });
  dtInput.addEventListener("input", () => {
    dtLabel.textContent = dt().toExponential(1);
    sim.set_dt(dt());
  });
  field.addEventListener("click", (ev) => {
    const rect = field.getBoundingClientRect();
    const [x, y] = fromCanvas(ev.clientX - rect.left, ev.clientY - rect.top);
    sim.melt(x, y, Number(document.getElementById("radius").value));
    record();
    refresh();
  });
}

main();
