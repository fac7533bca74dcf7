/** Bootstrap and event wiring for the scenario explorer. */

import { ApiClient, ApiError, ConnectionError, resolveBaseUrl } from "./api.js";
import {
  renderBadge,
  renderBanners,
  renderChart,
  renderConnectionError,
  renderEmptyState,
  renderGraph,
  renderRanking,
  renderSliders,
  renderWeightEditor,
} from "./render.js";
import {
  applySuggestedImpulse,
  clearOverlay,
  controlFactors,
  documentWithWeightDrafts,
  draftToScenario,
  newViewModel,
  noteInlineError,
  recordRun,
  saveDraft,
  setDraftImpulse,
  setMap,
  setWeightDraft,
  targetFactor,
  type ViewModel,
} from "./state.js";
import type { MapDoc } from "./types.js";

const EXAMPLE_MAP: MapDoc = {
  format: "fcm/1",
  kind: "map",
  metadata: { name: "chain", version: "1", municipality_type: null },
  factors: [
    { id: "p", name: "Production", kind: "control", parent: null },
    { id: "q", name: "Quality of life", kind: "target", parent: null },
  ],
  edges: [{ source: "p", target: "q", weight: 0.5 }],
};

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export function start(): void {
  const api = new ApiClient(resolveBaseUrl(window.location));
  const vm = newViewModel();

  const mapSelect = byId<HTMLSelectElement>("map-select");
  const graphSvg = byId<SVGSVGElement & HTMLElement>("graph");
  const chartSvg = byId<SVGSVGElement & HTMLElement>("chart");
  const sliders = byId<HTMLDivElement>("sliders");
  const weightEditor = byId<HTMLDivElement>("weight-editor");
  const horizonInput = byId<HTMLInputElement>("horizon");
  const horizonShown = byId<HTMLSpanElement>("horizon-value");
  const clampInput = byId<HTMLInputElement>("clamp");
  const desiredInput = byId<HTMLInputElement>("desired-delta");
  const rankingTable = byId<HTMLTableElement>("ranking");
  const draftsList = byId<HTMLUListElement>("drafts");

  function redraw(): void {
    renderConnectionError(byId("connection"), vm, () => void reload());
    renderEmptyState(byId("empty-state"), vm.connection === "ok" && vm.maps.length === 0);
    renderBanners(byId("banners"), vm);
    renderBadge(byId("badge"), vm);
    renderGraph(graphSvg as unknown as SVGSVGElement, vm);
    const target = targetFactor(vm.mapDoc);
    const shown = target ? [target, ...controlFactors(vm.mapDoc)] : controlFactors(vm.mapDoc);
    renderChart(chartSvg as unknown as SVGSVGElement, vm, shown);
    renderSliders(sliders, vm, {
      onImpulse: (factor, value) => {
        setDraftImpulse(vm, factor, value);
      },
    });
    renderWeightEditor(weightEditor, vm, (s, t, w) => setWeightDraft(vm, s, t, w));
    renderRanking(rankingTable, vm);
    horizonShown.textContent = horizonInput.value;
    draftsList.textContent = "";
    for (const draft of vm.savedDrafts) {
      const item = document.createElement("li");
      const impulses = Object.entries(draft.impulses)
        .map(([k, v]) => `${k}=${v}`)
        .join(", ");
      item.textContent = `${draft.name}: ${impulses} (T=${draft.horizon})`;
      draftsList.appendChild(item);
    }
    mapSelect.textContent = "";
    for (const entry of vm.maps) {
      const option = document.createElement("option");
      option.value = entry.id;
      option.textContent = entry.name ? `${entry.name} (${entry.id})` : entry.id;
      if (entry.id === vm.mapId) option.selected = true;
      mapSelect.appendChild(option);
    }
  }

  function fail(err: unknown): void {
    if (err instanceof DOMException && err.name === "AbortError") return; // superseded
    if (err instanceof ConnectionError) {
      vm.connection = "unreachable";
    } else if (err instanceof ApiError) {
      if (err.code === "unreachable-target") {
        vm.notice = err.message; // non-fatal: target cannot be reached
      } else {
        noteInlineError(vm, err.message);
      }
    } else {
      vm.notice = String(err);
    }
    redraw();
  }

  async function loadMap(id: string): Promise<void> {
    const map = await api.getMap(id);
    setMap(vm, id, map);
    vm.analysis = await api.analyze(id);
    vm.notice = null;
    redraw();
  }

  async function reload(): Promise<void> {
    vm.connection = "loading";
    try {
      const listed = await api.listMaps();
      vm.connection = "ok";
      vm.maps = listed.doc.maps;
      if (!vm.mapId && vm.maps.length > 0) {
        await loadMap(vm.maps[0].id);
      }
      redraw();
    } catch (err) {
      fail(err);
    }
  }

  async function runWhatIf(): Promise<void> {
    if (!vm.mapId) return;
    vm.draft.horizon = Number(horizonInput.value);
    vm.draft.clamp = clampInput.checked;
    const controls = controlFactors(vm.mapDoc);
    const scenario = draftToScenario(vm.draft, controls);
    try {
      const run = await api.simulate(vm.mapId, {
        schedule: scenario.schedule,
        horizon: scenario.horizon,
        clamp: scenario.clamp,
      });
      recordRun(vm, run);
      redraw();
    } catch (err) {
      fail(err);
    }
  }

  async function compareDrafts(): Promise<void> {
    if (!vm.mapId || !vm.mapDoc) return;
    const target = targetFactor(vm.mapDoc);
    if (!target) return;
    const controls = controlFactors(vm.mapDoc);
    const horizon = Number(horizonInput.value);
    const scenarios = [...vm.savedDrafts, vm.draft].map((d) =>
      draftToScenario({ ...d, horizon }, controls),
    );
    try {
      vm.ranking = await api.compare(vm.mapId, scenarios, {
        factor: target,
        desired_delta: Number(desiredInput.value),
        horizon,
      });
      redraw();
    } catch (err) {
      fail(err);
    }
  }

  async function suggestImpulse(): Promise<void> {
    if (!vm.mapId || !vm.mapDoc) return;
    const target = targetFactor(vm.mapDoc);
    if (!target) return;
    try {
      const suggestion = await api.invert(vm.mapId, controlFactors(vm.mapDoc), {
        factor: target,
        desired_delta: Number(desiredInput.value),
        horizon: Number(horizonInput.value),
      });
      applySuggestedImpulse(vm, suggestion);
      redraw();
    } catch (err) {
      fail(err);
    }
  }

  byId<HTMLButtonElement>("run").addEventListener("click", () => void runWhatIf());
  byId<HTMLButtonElement>("clear-overlay").addEventListener("click", () => {
    clearOverlay(vm);
    redraw();
  });
  byId<HTMLButtonElement>("save-draft").addEventListener("click", () => {
    saveDraft(vm);
    redraw();
  });
  byId<HTMLButtonElement>("compare").addEventListener("click", () => void compareDrafts());
  byId<HTMLButtonElement>("suggest").addEventListener("click", () => void suggestImpulse());
  byId<HTMLButtonElement>("create-example").addEventListener("click", () => {
    void (async () => {
      try {
        const created = await api.createMap(EXAMPLE_MAP);
        await reload();
        await loadMap(created.doc.id);
      } catch (err) {
        fail(err);
      }
    })();
  });
  byId<HTMLButtonElement>("save-map").addEventListener("click", () => {
    void (async () => {
      if (!vm.mapId) return;
      try {
        await api.putMap(vm.mapId, documentWithWeightDrafts(vm));
        await loadMap(vm.mapId); // reload the stored revision
      } catch (err) {
        fail(err);
      }
    })();
  });
  byId<HTMLInputElement>("upload").addEventListener("change", (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    void (async () => {
      try {
        const text = await file.text();
        const created = await api.createMap(JSON.parse(text) as MapDoc);
        await reload();
        await loadMap(created.doc.id);
      } catch (err) {
        fail(err);
      }
    })();
  });
  mapSelect.addEventListener("change", () => {
    void loadMap(mapSelect.value).catch(fail);
  });
  horizonInput.addEventListener("input", () => {
    horizonShown.textContent = horizonInput.value;
  });

  void reload();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  start();
}
