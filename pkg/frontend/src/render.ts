/** DOM rendering: SVG graph, overlay chart, tables, banners.
 *
 * Render functions read the view model and server documents; the only
 * numbers they draw are server-sent values (raw tokens where the value is
 * a headline figure).  Pixel math stays internal.
 */

import { buildSeries, toPixels, valueExtremes, type ChartSeries } from "./chart.js";
import { forceLayout } from "./layout.js";
import { rawNumber } from "./rawjson.js";
import { controlFactors, targetFactor, type ViewModel } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const KIND_COLORS: Record<string, string> = {
  target: "#b5483d",
  control: "#2d6fb3",
  general: "#5a7b5a",
  special: "#8a6d3b",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

function svgEl(tag: string, attrs: Record<string, string> = {}): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

export function renderBadge(container: HTMLElement, vm: ViewModel): void {
  container.textContent = "";
  if (!vm.analysis) return;
  const cls = vm.analysis.doc.stability.classification;
  // radius shown verbatim as the server sent it
  const rho = rawNumber(vm.analysis.raw, "spectral_radius");
  const badge = el("span", { class: `badge badge-${cls}` }, `${cls} ρ=${rho}`);
  container.appendChild(badge);
}

export function renderBanners(container: HTMLElement, vm: ViewModel): void {
  container.textContent = "";
  if (vm.mapDoc && targetFactor(vm.mapDoc) === null) {
    container.appendChild(el("div", { class: "banner warn" }, "no target factor"));
  }
  if (vm.notice) {
    container.appendChild(el("div", { class: "banner notice" }, vm.notice));
  }
}

export function renderGraph(svg: SVGSVGElement, vm: ViewModel): void {
  svg.textContent = "";
  if (!vm.mapDoc) return;
  const width = Number(svg.getAttribute("width") ?? 480);
  const height = Number(svg.getAttribute("height") ?? 360);
  const ids = vm.mapDoc.factors.map((f) => f.id);
  const positions = new Map(
    forceLayout(ids, vm.mapDoc.edges, width, height).map((p) => [p.id, p]),
  );
  const marker = svgEl("marker", {
    id: "arrow",
    viewBox: "0 0 10 10",
    refX: "22",
    refY: "5",
    markerWidth: "7",
    markerHeight: "7",
    orient: "auto-start-reverse",
  });
  const tip = svgEl("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#666" });
  marker.appendChild(tip);
  const defs = svgEl("defs");
  defs.appendChild(marker);
  svg.appendChild(defs);

  for (const edge of vm.mapDoc.edges) {
    const a = positions.get(edge.source);
    const b = positions.get(edge.target);
    if (!a || !b) continue;
    if (edge.source === edge.target) {
      const loop = svgEl("path", {
        d: `M ${a.x} ${a.y - 14} C ${a.x + 42} ${a.y - 46}, ${a.x - 42} ${a.y - 46}, ${a.x} ${a.y - 14}`,
        fill: "none",
        stroke: edge.weight < 0 ? "#b5483d" : "#666",
        "stroke-width": "1.4",
      });
      svg.appendChild(loop);
    } else {
      const line = svgEl("line", {
        x1: String(a.x),
        y1: String(a.y),
        x2: String(b.x),
        y2: String(b.y),
        stroke: edge.weight < 0 ? "#b5483d" : "#666",
        "stroke-width": "1.4",
        "marker-end": "url(#arrow)",
        "stroke-dasharray": edge.weight < 0 ? "5,3" : "",
      });
      svg.appendChild(line);
    }
    const lx = edge.source === edge.target ? a.x : (a.x + b.x) / 2;
    const ly = edge.source === edge.target ? a.y - 50 : (a.y + b.y) / 2 - 4;
    const label = svgEl("text", {
      x: String(lx),
      y: String(ly),
      class: "edge-label",
      "text-anchor": "middle",
    });
    label.textContent = String(edge.weight);
    svg.appendChild(label);
  }

  for (const factor of vm.mapDoc.factors) {
    const p = positions.get(factor.id);
    if (!p) continue;
    const group = svgEl("g", { class: "node", "data-factor": factor.id });
    group.appendChild(
      svgEl("circle", {
        cx: String(p.x),
        cy: String(p.y),
        r: "14",
        fill: KIND_COLORS[factor.kind] ?? "#777",
      }),
    );
    const text = svgEl("text", {
      x: String(p.x),
      y: String(p.y + 27),
      "text-anchor": "middle",
      class: "node-label",
    });
    text.textContent = factor.id;
    group.appendChild(text);
    svg.appendChild(group);
  }
}

const SERIES_COLORS = ["#2d6fb3", "#5a7b5a", "#8a6d3b", "#7b4fa0", "#b5483d"];

export function chartSeriesFor(vm: ViewModel, factors: string[]): ChartSeries[] {
  const series: ChartSeries[] = [];
  if (vm.previousRun) series.push(...buildSeries(vm.previousRun, factors, true));
  if (vm.lastRun) series.push(...buildSeries(vm.lastRun, factors, false));
  return series;
}

export function renderChart(svg: SVGSVGElement, vm: ViewModel, factors: string[]): void {
  svg.textContent = "";
  const width = Number(svg.getAttribute("width") ?? 520);
  const height = Number(svg.getAttribute("height") ?? 300);
  const series = chartSeriesFor(vm, factors);
  if (series.length === 0) return;
  const pixels = toPixels(series, width, height);
  let colorIndex = 0;
  for (const s of series) {
    const pts = pixels.get(s)!;
    const color = SERIES_COLORS[colorIndex++ % SERIES_COLORS.length];
    if (pts.length > 1) {
      const polyline = svgEl("polyline", {
        points: pts.map((p) => `${p.x},${p.y}`).join(" "),
        fill: "none",
        stroke: color,
        "stroke-width": s.overlay ? "1" : "2",
        opacity: s.overlay ? "0.35" : "1",
        class: s.overlay ? "series overlay" : "series",
        "data-factor": s.factor,
      });
      svg.appendChild(polyline);
    }
    for (const p of pts) {
      const dot = svgEl("circle", {
        cx: String(p.x),
        cy: String(p.y),
        r: s.overlay ? "2" : "3",
        fill: color,
        opacity: s.overlay ? "0.35" : "1",
        class: "chart-point",
        "data-factor": s.factor,
        "data-t": String(p.point.t),
        "data-value": p.point.label,
      });
      const title = svgEl("title");
      title.textContent = `${s.factor}(${p.point.t}) = ${p.point.label}`;
      dot.appendChild(title);
      svg.appendChild(dot);
    }
  }
  const extremes = valueExtremes(series.filter((s) => !s.overlay)) ?? valueExtremes(series);
  if (extremes) {
    const hi = svgEl("text", { x: "4", y: "14", class: "axis-label" });
    hi.textContent = extremes.max.label;
    const lo = svgEl("text", { x: "4", y: String(height - 6), class: "axis-label" });
    lo.textContent = extremes.min.label;
    svg.appendChild(hi);
    svg.appendChild(lo);
  }
}

export function renderRanking(table: HTMLTableElement, vm: ViewModel): void {
  table.textContent = "";
  if (!vm.ranking) return;
  const head = table.createTHead().insertRow();
  for (const caption of ["scenario", "target delta", "distance"]) {
    head.appendChild(el("th", {}, caption));
  }
  const body = table.createTBody();
  // rows in server order: the ranking is the server's, not the client's
  for (const entry of vm.ranking.doc.ranking) {
    const row = body.insertRow();
    row.insertCell().textContent = entry.name;
    row.insertCell().textContent = String(entry.target_delta);
    row.insertCell().textContent = String(entry.distance);
  }
}

export interface SliderHandlers {
  onImpulse(factor: string, value: number): void;
}

export function renderSliders(
  container: HTMLElement,
  vm: ViewModel,
  handlers: SliderHandlers,
): void {
  container.textContent = "";
  const controls = controlFactors(vm.mapDoc);
  if (vm.mapDoc && controls.length === 0) {
    container.appendChild(el("div", { class: "banner warn" }, "map has no control factors"));
    return;
  }
  for (const fid of controls) {
    const row = el("div", { class: "slider-row", "data-factor": fid });
    row.appendChild(el("label", { for: `slider-${fid}` }, fid));
    const slider = el("input", {
      id: `slider-${fid}`,
      type: "range",
      min: "-2",
      max: "2",
      step: "0.05",
      value: String(vm.draft.impulses[fid] ?? 0),
    });
    const box = el("input", {
      type: "number",
      step: "0.05",
      value: String(vm.draft.impulses[fid] ?? 0),
      class: "impulse-value",
    });
    slider.addEventListener("input", () => {
      box.value = slider.value;
      handlers.onImpulse(fid, Number(slider.value));
    });
    box.addEventListener("change", () => {
      slider.value = box.value;
      handlers.onImpulse(fid, Number(box.value));
    });
    row.appendChild(slider);
    row.appendChild(box);
    if (vm.inlineError && vm.inlineError.factor === fid) {
      row.appendChild(el("div", { class: "inline-error" }, vm.inlineError.message));
      row.classList.add("has-error");
    }
    container.appendChild(row);
  }
  if (vm.inlineError && vm.inlineError.factor === null) {
    container.appendChild(el("div", { class: "inline-error" }, vm.inlineError.message));
  }
}

export function renderWeightEditor(
  container: HTMLElement,
  vm: ViewModel,
  onWeight: (source: string, target: string, value: number) => void,
): void {
  container.textContent = "";
  if (!vm.mapDoc) return;
  for (const edge of vm.mapDoc.edges) {
    const key = `${edge.source}->${edge.target}`;
    const row = el("div", { class: "weight-row" });
    row.appendChild(el("span", { class: "edge-name" }, key));
    const box = el("input", {
      type: "number",
      step: "0.05",
      min: "-1",
      max: "1",
      value: String(vm.weightDrafts[key] ?? edge.weight),
    });
    box.addEventListener("change", () => onWeight(edge.source, edge.target, Number(box.value)));
    row.appendChild(box);
    container.appendChild(row);
  }
}

export function renderEmptyState(container: HTMLElement, visible: boolean): void {
  container.textContent = "";
  if (!visible) return;
  container.appendChild(
    el(
      "div",
      { class: "empty-state" },
      "No maps stored yet. Upload a map document or create the bundled example.",
    ),
  );
}

export function renderConnectionError(container: HTMLElement, vm: ViewModel, onRetry: () => void): void {
  container.textContent = "";
  if (vm.connection !== "unreachable") return;
  const box = el("div", { class: "banner error" });
  box.appendChild(el("span", {}, "server unreachable — "));
  const retry = el("button", { class: "retry" }, "retry");
  retry.addEventListener("click", onRetry);
  box.appendChild(retry);
  container.appendChild(box);
}
