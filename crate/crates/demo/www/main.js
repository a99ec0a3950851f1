import init, { decompose, f0_check, evaluate } from "./pkg/mdz_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const COLORS = ["#1b6ac9", "#d9480f", "#2b8a3e", "#7048e8", "#c2255c", "#0b7285", "#e67700", "#5c940d"];

function show(out, fn) {
  out.classList.remove("err");
  const t0 = performance.now();
  try {
    const text = JSON.stringify(JSON.parse(fn()), null, 2);
    out.textContent = `${text}\n(${(performance.now() - t0).toFixed(0)} ms)`;
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e.message ?? e);
  }
}

function draw(data) {
  const canvas = $("dec-canvas");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const all = data.cones.flatMap((c) => c.points);
  const extent = Math.max(1, ...all.map(([x, y]) => Math.max(Math.abs(x), Math.abs(y))));
  const scale = (0.46 * Math.min(w, h)) / extent;
  const px = ([x, y]) => [w / 2 + x * scale, h / 2 - y * scale];

  ctx.strokeStyle = "#bbb";
  ctx.beginPath();
  ctx.moveTo(0, h / 2); ctx.lineTo(w, h / 2);
  ctx.moveTo(w / 2, 0); ctx.lineTo(w / 2, h);
  ctx.stroke();
  ctx.fillStyle = "#666";
  ctx.fillText(data.axes[0], w - 40, h / 2 - 6);
  ctx.fillText(data.axes[1], w / 2 + 6, 12);

  data.cones.forEach((cone, i) => {
    const color = COLORS[i % COLORS.length];
    ctx.strokeStyle = color;
    ctx.fillStyle = color;
    for (const r of cone.rays) {
      const len = extent / Math.hypot(r[0], r[1]);
      const [x, y] = px([r[0] * len, r[1] * len]);
      ctx.beginPath();
      ctx.moveTo(w / 2, h / 2);
      ctx.lineTo(x, y);
      ctx.stroke();
    }
    for (const p of cone.points) {
      const [x, y] = px(p);
      ctx.fillRect(x - 1.5, y - 1.5, 3, 3);
    }
  });
}

await init();

$("dec-run").onclick = () =>
  show($("dec-out"), () => {
    const json = decompose(num("dec-d"), num("dec-h"));
    const data = JSON.parse(json);
    draw(data);
    const summary = data.cones.map((c) => ({ generators: c.generators, sign: c.sign, points: c.points.length }));
    return JSON.stringify({ field: data.field, discriminant: data.discriminant, cones: summary });
  });

$("f0-run").onclick = () =>
  show($("f0-out"), () => {
    const t = Float64Array.from($("f0-t").value.split(",").map(Number));
    return f0_check(num("f0-d"), $("f0-gens").value, t, num("f0-a"));
  });

$("ev-run").onclick = () =>
  show($("ev-out"), () => evaluate(num("ev-d"), $("ev-cones").value, $("ev-exp").value, num("ev-a")));

$("dec-run").click();
