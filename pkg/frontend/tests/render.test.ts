// @vitest-environment happy-dom
import { describe, expect, it } from "vitest";

import {
  renderBadge,
  renderBanners,
  renderChart,
  renderConnectionError,
  renderEmptyState,
  renderGraph,
  renderRanking,
  renderSliders,
} from "../src/render.js";
import { newViewModel, noteInlineError, recordRun, setMap } from "../src/state.js";
import type { AnalysisDoc, MapDoc, RankingDoc, TrajectoryDoc } from "../src/types.js";
import { fixture } from "./helpers.js";

function loadedVm() {
  const vm = newViewModel();
  setMap(vm, "m1", fixture<MapDoc>("map_document.json"));
  return vm;
}

function svg(width = 520, height = 300): SVGSVGElement {
  const node = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  node.setAttribute("width", String(width));
  node.setAttribute("height", String(height));
  return node as SVGSVGElement;
}

describe("badge", () => {
  it("shows classification and the server's radius bytes verbatim", () => {
    const vm = loadedVm();
    vm.analysis = fixture<AnalysisDoc>("analyze.json");
    const host = document.createElement("div");
    renderBadge(host, vm);
    // the chain map has no cycle; the service sent 0.0
    expect(host.textContent).toBe("stable ρ=0.0");
  });
});

describe("graph view", () => {
  it("draws a node per factor and an edge label with the signed weight", () => {
    const vm = loadedVm();
    const host = svg(480, 360);
    renderGraph(host, vm);
    expect(host.querySelectorAll("g.node")).toHaveLength(2);
    const labels = Array.from(host.querySelectorAll("text.edge-label")).map(
      (n) => n.textContent,
    );
    expect(labels).toEqual(["0.5"]);
  });

  it("warns when the map has no target factor", () => {
    const vm = loadedVm();
    vm.mapDoc = {
      ...vm.mapDoc!,
      factors: vm.mapDoc!.factors.map((f) =>
        f.kind === "target" ? { ...f, kind: "general" as const } : f,
      ),
    };
    const host = document.createElement("div");
    renderBanners(host, vm);
    expect(host.textContent).toContain("no target factor");
  });
});

describe("chart view", () => {
  it("renders one dot per step carrying the server value bytes", () => {
    const vm = loadedVm();
    recordRun(vm, fixture<TrajectoryDoc>("simulate_p1_t2.json"));
    const host = svg();
    renderChart(host, vm, ["q"]);
    const dots = Array.from(host.querySelectorAll("circle.chart-point"));
    expect(dots.map((d) => d.getAttribute("data-value"))).toEqual(["0.0", "0.5", "0.5"]);
  });

  it("overlays the previous run until cleared", () => {
    const vm = loadedVm();
    recordRun(vm, fixture<TrajectoryDoc>("simulate_zero_t2.json"));
    recordRun(vm, fixture<TrajectoryDoc>("simulate_p1_t2.json"));
    const host = svg();
    renderChart(host, vm, ["q"]);
    expect(host.querySelectorAll("polyline.series")).toHaveLength(2);
    expect(host.querySelectorAll("polyline.overlay")).toHaveLength(1);
  });

  it("draws a single-point chart at horizon zero", () => {
    const vm = loadedVm();
    recordRun(vm, fixture<TrajectoryDoc>("simulate_horizon0.json"));
    const host = svg();
    renderChart(host, vm, ["q"]);
    expect(host.querySelectorAll("polyline")).toHaveLength(0);
    expect(host.querySelectorAll("circle.chart-point")).toHaveLength(1);
  });
});

describe("ranking table", () => {
  it("renders rows in the server's order without re-sorting", () => {
    const vm = loadedVm();
    vm.ranking = fixture<RankingDoc>("compare.json");
    const table = document.createElement("table");
    renderRanking(table, vm);
    const names = Array.from(table.querySelectorAll("tbody tr td:first-child")).map(
      (n) => n.textContent,
    );
    expect(names).toEqual(vm.ranking.doc.ranking.map((r) => r.name));
    expect(names).toEqual(["A", "B"]);
  });
});

describe("sliders", () => {
  it("renders a slider per control factor only", () => {
    const vm = loadedVm();
    const host = document.createElement("div");
    renderSliders(host, vm, { onImpulse: () => undefined });
    const rows = Array.from(host.querySelectorAll(".slider-row"));
    expect(rows.map((r) => r.getAttribute("data-factor"))).toEqual(["p"]);
  });

  it("marks the control a validation error mentions", () => {
    const vm = loadedVm();
    noteInlineError(vm, "schedule at step 0 touches non-control factor 'p'");
    const host = document.createElement("div");
    renderSliders(host, vm, { onImpulse: () => undefined });
    const row = host.querySelector(".slider-row[data-factor='p']")!;
    expect(row.classList.contains("has-error")).toBe(true);
    expect(row.textContent).toContain("non-control factor");
  });
});

describe("empty state", () => {
  it("prompts to create or upload when no maps exist", () => {
    const host = document.createElement("div");
    renderEmptyState(host, true);
    expect(host.textContent).toContain("Upload a map");
    renderEmptyState(host, false);
    expect(host.textContent).toBe("");
  });
});

describe("connection error", () => {
  it("shows a retry control only while the server is unreachable", () => {
    const vm = newViewModel();
    vm.connection = "unreachable";
    const host = document.createElement("div");
    let retried = 0;
    renderConnectionError(host, vm, () => {
      retried += 1;
    });
    expect(host.textContent).toContain("server unreachable");
    (host.querySelector("button.retry") as HTMLButtonElement).click();
    expect(retried).toBe(1);
    vm.connection = "ok";
    renderConnectionError(host, vm, () => undefined);
    expect(host.textContent).toBe("");
  });
});
