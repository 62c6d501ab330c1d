import init, { tree_view, bethe_view, transform_view } from "./pkg/ultrametric_demo.js";

const SVG = "http://www.w3.org/2000/svg";
const $ = (id) => document.getElementById(id);

function el(name, attrs, text) {
  const e = document.createElementNS(SVG, name);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  if (text !== undefined) e.textContent = text;
  return e;
}

function draw(svg, view, mode) {
  svg.replaceChildren();
  const w = svg.clientWidth || 900;
  const h = svg.clientHeight || 360;
  const pad = 30;
  const maxDepth = Math.max(1, ...view.nodes.map((n) => n.depth));
  const pos = view.nodes.map((n) => ({
    x: pad + n.x * (w - 2 * pad),
    y: mode === "depth" ? pad + (n.depth / maxDepth) * (h - 3 * pad) : pad + (1 - n.height) * (h - 3 * pad),
  }));
  for (const [a, b] of view.edges) {
    if (mode === "depth") {
      svg.append(el("line", { x1: pos[a].x, y1: pos[a].y, x2: pos[b].x, y2: pos[b].y }));
    } else {
      svg.append(el("line", { x1: pos[b].x, y1: pos[a].y, x2: pos[b].x, y2: pos[b].y }));
      svg.append(el("line", { x1: pos[a].x, y1: pos[a].y, x2: pos[b].x, y2: pos[a].y }));
    }
  }
  const small = view.nodes.length > 60;
  view.nodes.forEach((n, i) => {
    const { x, y } = pos[i];
    const title = el("title", {}, `${n.label}${n.members.length ? "  {" + n.members.join(", ") + "}" : ""}`);
    const mark = n.leaf ? el("rect", { x: x - 4, y: y - 4, width: 8, height: 8 }) : el("circle", { cx: x, cy: y, r: 5 });
    mark.append(title);
    svg.append(mark);
    if (!small) svg.append(el("text", { x: x + 7, y: y - 6 }, n.label));
    if (n.leaf && n.members.length === 1) {
      svg.append(el("text", { x: x, y: y + 18, "text-anchor": "middle" }, n.members[0]));
    }
  });
}

function show(raw, svg, info, mode) {
  const r = JSON.parse(raw);
  if (r.error) {
    info.className = "error";
    info.textContent = r.error;
    svg.replaceChildren();
    return null;
  }
  info.className = "info";
  const v = r.view;
  const parts = [`${v.nodes.length} vertices`];
  if (v.distances.length) parts.push(`D(X) = {${v.distances.join(", ")}}`);
  if (v.truncated) parts.push("truncated: leaves keep positive labels");
  info.textContent = parts.join("   ");
  draw(svg, v, mode);
  return v;
}

const mode = () => document.querySelector('input[name="mode"]:checked').value;

function build() {
  show(tree_view($("matrix").value), $("tree-svg"), $("tree-info"), mode());
}

function apply() {
  const spec = $("fn-custom").value.trim() || $("fn").value;
  const v = show(transform_view($("matrix").value, spec), $("fn-svg"), $("fn-info"), mode());
  if (v) $("fn-info").textContent += "\n" + v.matrix.map((row) => row.join("  ")).join("\n");
  $("fn-info").style.whiteSpace = "pre";
}

function bethe() {
  const p = Number($("prime").value);
  const d = Number($("depth").value);
  show(bethe_view(p, d, $("sphere").checked), $("bethe-svg"), $("bethe-info"), "depth");
}

await init();
$("build").onclick = build;
$("apply").onclick = apply;
$("bethe").onclick = bethe;
for (const r of document.querySelectorAll('input[name="mode"]')) r.onchange = () => { build(); apply(); };
build();
apply();
bethe();
