import init, { analyze, find_subset, enumerate } from "./pkg/subset_syzygy_demo.js";

const R = 6;
const canvas = document.getElementById("grid");
const ctx = canvas.getContext("2d");
const step = canvas.width / (2 * R + 2);
const $ = (id) => document.getElementById(id);

let points = [];
let highlight = new Set();

const toScreen = (x, y) => [(x + R + 1) * step, (R + 1 - y) * step];

function draw() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#ddd";
  for (let i = -R; i <= R; i++) {
    const [a, b] = toScreen(i, -R);
    const [c, d] = toScreen(i, R);
    ctx.beginPath(); ctx.moveTo(a, b); ctx.lineTo(c, d); ctx.stroke();
    const [e, f] = toScreen(-R, i);
    const [g, h] = toScreen(R, i);
    ctx.beginPath(); ctx.moveTo(e, f); ctx.lineTo(g, h); ctx.stroke();
  }
  ctx.font = "11px sans-serif";
  points.forEach((p, i) => {
    const [sx, sy] = toScreen(p.x, p.y);
    ctx.fillStyle = highlight.has(i + 1) ? "#2a7" : "#245";
    ctx.beginPath(); ctx.arc(sx, sy, 7, 0, 2 * Math.PI); ctx.fill();
    ctx.fillStyle = "#000";
    ctx.fillText(String(i + 1), sx + 8, sy - 8);
  });
}

function reset() {
  highlight = new Set();
  $("error").textContent = "";
  $("table").innerHTML = "";
  draw();
}

canvas.addEventListener("click", (ev) => {
  const rect = canvas.getBoundingClientRect();
  const x = Math.round((ev.clientX - rect.left) / step) - R - 1;
  const y = R + 1 - Math.round((ev.clientY - rect.top) / step);
  if (Math.abs(x) > R || Math.abs(y) > R) return;
  const at = points.findIndex((p) => p.x === x && p.y === y);
  if (at >= 0) points.splice(at, 1); else points.push({ x, y });
  reset();
});

function call(f, ...args) {
  try {
    $("error").textContent = "";
    return JSON.parse(f(JSON.stringify(points), ...args));
  } catch (e) {
    $("error").textContent = String(e);
    return null;
  }
}

const mValue = () => Number($("m").value);

function showAnalysis() {
  const a = call(analyze);
  if (!a) return;
  const dm = a.degree_matrix.entries.map((r) => r.join(" ")).join("\n  ");
  $("summary").textContent =
    `h_X    ${a.hilbert.values.join(" ")}\n` +
    `dh_X   ${a.hilbert.deltas.join(" ")}\n` +
    `l = ${a.label.l}, generators in degree l+1: ${a.label.gens_at_lplus1}, case ${a.label.case}\n` +
    (a.gcd_degree === null ? "" : `gcd of I_l has degree ${a.gcd_degree}\n`) +
    `\n${a.diagram}\ndegree matrix\n  ${dm}`;
}

function showChain() {
  const c = call(find_subset, mValue());
  if (!c) return;
  highlight = new Set(c.subset);
  const steps = c.steps.map((s) => `remove ${s.removed} -> ${s.size} points`).join("\n");
  const checks = c.final_checks.map((k) => `s=${k.s}: predicted ${k.predicted}, actual ${k.actual}`).join("\n");
  $("summary").textContent = `${steps}\nsubset ${c.subset.join(" ")}\n${checks}\n(${c.explored} sets explored)`;
  $("table").innerHTML = "";
  draw();
}

function showEnumeration() {
  const e = call(enumerate, mValue());
  if (!e) return;
  $("summary").textContent = `${e.records.length} subsets, ${e.winners} with the predicted ranks`;
  const head = "<tr><th>subset</th><th>truncated</th><th>rank μ_s, s = 1..</th><th>gens l+1</th></tr>";
  const rows = e.records.map((r, i) =>
    `<tr data-i="${i}" class="${r.achieves_prediction ? "hit" : ""}"><td>${r.subset.join(" ")}</td>` +
    `<td>${r.truncated ? "yes" : "no"}</td><td>${r.mu_ranks.join(" ")}</td><td>${r.gens_at_lplus1}</td></tr>`);
  $("table").innerHTML = `<table>${head}${rows.join("")}</table>`;
  $("table").querySelectorAll("tr[data-i]").forEach((tr) =>
    tr.addEventListener("click", () => {
      highlight = new Set(e.records[Number(tr.dataset.i)].subset);
      draw();
    }));
}

await init();
$("clear").onclick = () => { points = []; reset(); };
$("sample").onclick = () => {
  points = [{ x: 0, y: 0 }, { x: 1, y: 0 }, { x: 1, y: 1 }, { x: 1, y: 2 }, { x: 2, y: 2 }];
  reset();
};
$("analyze").onclick = showAnalysis;
$("find").onclick = showChain;
$("enumerate").onclick = showEnumeration;
draw();
