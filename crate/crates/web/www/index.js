import init, { deltaSweep, runProtocol, chiSlice } from "./pkg/gaussify_web.js";

const num = (id) => Number(document.getElementById(id).value);
const el = (id) => document.getElementById(id);

function params() {
  return { lambda: num("lambda"), cutoff: num("cutoff"), delta: num("delta"), rounds: num("rounds") };
}

function fail(target, e) {
  target.innerHTML = `<span class="err">${e}</span>`;
}

function plotLines(canvas, xs, series) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 36;
  ctx.clearRect(0, 0, w, h);
  const ys = series.flatMap((s) => s.values.filter((v) => v !== null));
  const lo = Math.min(0, ...ys), hi = Math.max(...ys) * 1.05 || 1;
  const px = (x) => pad + (x - xs[0]) / (xs[xs.length - 1] - xs[0]) * (w - 2 * pad);
  const py = (y) => h - pad - (y - lo) / (hi - lo) * (h - 2 * pad);
  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#333";
  ctx.fillText("Δ", w / 2, h - 8);
  ctx.fillText(hi.toFixed(2), 2, pad + 4);
  ctx.fillText(lo.toFixed(2), 2, h - pad);
  series.forEach((s, k) => {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    s.values.forEach((v, i) => {
      if (v === null) return;
      i === 0 ? ctx.moveTo(px(xs[i]), py(v)) : ctx.lineTo(px(xs[i]), py(v));
    });
    ctx.stroke();
    ctx.fillStyle = s.color;
    ctx.fillText(s.label, pad + 8, pad + 14 + 14 * k);
  });
}

function heatmap(canvas, n, values) {
  const ctx = canvas.getContext("2d");
  const cell = canvas.width / n;
  values.forEach((v, k) => {
    const shade = Math.round(255 * (1 - Math.min(1, v)));
    ctx.fillStyle = `rgb(${shade},${shade},255)`;
    ctx.fillRect(Math.floor(k / n) * cell, (k % n) * cell, cell + 1, cell + 1);
  });
}

function sweep() {
  const p = params();
  try {
    const rows = JSON.parse(deltaSweep(p.lambda, p.cutoff, 21));
    plotLines(el("sweep-plot"), rows.map((r) => r.delta), [
      { label: "E_N(ρ∞)", color: "#c33", values: rows.map((r) => r.logneg_inf) },
      { label: "E_N(ρ), Fock", color: "#36c", values: rows.map((r) => r.logneg_rho_fock) },
      { label: "E_N(ρ), Gaussian", color: "#3a3", values: rows.map((r) => r.logneg_rho_gaussian) },
    ]);
    const bad = rows.filter((r) => r.error);
    el("sweep-msg").textContent = bad.length ? `${bad.length} points reported errors` : "";
  } catch (e) {
    fail(el("sweep-msg"), e);
  }
}

function runLedger() {
  const p = params();
  try {
    const report = JSON.parse(runProtocol(p.lambda, p.delta, p.cutoff, p.rounds));
    const head = "<tr><th>n</th><th>p<sub>succ</sub></th><th>copies</th><th>leakage</th><th>E_N</th><th>fidelity</th></tr>";
    const fmt = (v) => (v === null || v === undefined ? "" : Number(v).toPrecision(5));
    const body = report.rows
      .map((r) => `<tr${r.accepted ? "" : ' class="err"'}><td>${r.n}</td><td>${fmt(r.success_prob)}</td><td>${r.cumulative_copies}</td>` +
        `<td>${fmt(r.leakage)}</td><td>${fmt(r.logneg_fock)}</td><td>${fmt(r.fidelity_to_target)}</td></tr>`)
      .join("");
    const note = report.failure ? `<p class="err">stopped at round ${report.failure.round}: ${report.failure.message}</p>` : "";
    el("run-out").innerHTML = `<table>${head}${body}</table>${note}`;
  } catch (e) {
    fail(el("run-out"), e);
  }
}

function chi() {
  const p = params();
  const n = 31;
  try {
    const s = JSON.parse(chiSlice(p.lambda, p.delta, p.cutoff, p.rounds, 4.0, n));
    heatmap(el("chi-measured"), n, s.measured);
    if (s.predicted) heatmap(el("chi-predicted"), n, s.predicted);
    const dev = s.max_deviation === null ? "n/a" : s.max_deviation.toExponential(3);
    el("chi-msg").textContent = `left: σ after round ${s.round}; right: Gaussian limit; max |difference| ${dev}`;
  } catch (e) {
    fail(el("chi-msg"), e);
  }
}

await init();
el("sweep").onclick = sweep;
el("run").onclick = runLedger;
el("chi").onclick = chi;
sweep();
