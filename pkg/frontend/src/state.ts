/** View model for the scenario explorer.
 *
 * Holds server responses and draft inputs; never computes model numbers.
 * Draft edits (impulses, weight tweaks) live beside the loaded map
 * document and do not modify it; only an explicit save turns weight
 * drafts into a PUT.
 */

import type {
  AnalysisDoc,
  InvertDoc,
  MapDoc,
  MapListEntry,
  RankingDoc,
  Raw,
  ScenarioBody,
  TrajectoryDoc,
} from "./types.js";

export interface WhatIfDraft {
  name: string;
  impulses: Record<string, number>;
  horizon: number;
  clamp: boolean;
}

export interface InlineError {
  message: string;
  factor: string | null;
}

export interface ViewModel {
  connection: "loading" | "ok" | "unreachable";
  maps: MapListEntry[];
  mapId: string | null;
  mapDoc: MapDoc | null;
  mapRaw: string;
  analysis: Raw<AnalysisDoc> | null;
  draft: WhatIfDraft;
  savedDrafts: WhatIfDraft[];
  desiredDelta: number;
  lastRun: Raw<TrajectoryDoc> | null;
  previousRun: Raw<TrajectoryDoc> | null;
  ranking: Raw<RankingDoc> | null;
  inlineError: InlineError | null;
  notice: string | null;
  weightDrafts: Record<string, number>;
}

export function newViewModel(): ViewModel {
  return {
    connection: "loading",
    maps: [],
    mapId: null,
    mapDoc: null,
    mapRaw: "",
    analysis: null,
    draft: { name: "draft-1", impulses: {}, horizon: 10, clamp: false },
    savedDrafts: [],
    desiredDelta: 0,
    lastRun: null,
    previousRun: null,
    ranking: null,
    inlineError: null,
    notice: null,
    weightDrafts: {},
  };
}

export function controlFactors(doc: MapDoc | null): string[] {
  return doc ? doc.factors.filter((f) => f.kind === "control").map((f) => f.id) : [];
}

export function targetFactor(doc: MapDoc | null): string | null {
  const found = doc?.factors.find((f) => f.kind === "target");
  return found ? found.id : null;
}

export function setMap(vm: ViewModel, id: string, map: Raw<MapDoc>): void {
  vm.mapId = id;
  vm.mapDoc = map.doc;
  vm.mapRaw = map.raw;
  vm.analysis = null;
  vm.lastRun = null;
  vm.previousRun = null;
  vm.ranking = null;
  vm.inlineError = null;
  vm.weightDrafts = {};
  vm.draft = { name: "draft-1", impulses: {}, horizon: vm.draft.horizon, clamp: false };
  for (const fid of controlFactors(map.doc)) vm.draft.impulses[fid] = 0;
  vm.savedDrafts = [];
}

export function setDraftImpulse(vm: ViewModel, factor: string, value: number): void {
  vm.draft.impulses[factor] = value;
  vm.inlineError = null;
}

/** New run becomes current; the previous one stays overlaid until cleared. */
export function recordRun(vm: ViewModel, run: Raw<TrajectoryDoc>): void {
  vm.previousRun = vm.lastRun;
  vm.lastRun = run;
  vm.inlineError = null;
}

export function clearOverlay(vm: ViewModel): void {
  vm.previousRun = null;
}

/** Map a server validation error to the slider it talks about, if any. */
export function noteInlineError(vm: ViewModel, message: string): void {
  const mentioned =
    controlFactors(vm.mapDoc).find((fid) => message.includes(`'${fid}'`)) ??
    vm.mapDoc?.factors.find((f) => message.includes(`'${f.id}'`))?.id ??
    null;
  vm.inlineError = { message, factor: mentioned };
}

export function saveDraft(vm: ViewModel): void {
  const number = vm.savedDrafts.length + 2;
  vm.savedDrafts.push({
    ...vm.draft,
    impulses: { ...vm.draft.impulses },
  });
  vm.draft = {
    name: `draft-${number}`,
    impulses: { ...vm.draft.impulses },
    horizon: vm.draft.horizon,
    clamp: vm.draft.clamp,
  };
}

/** Fill a fresh draft from the server's suggested impulse, as sent. */
export function applySuggestedImpulse(vm: ViewModel, suggestion: Raw<InvertDoc>): void {
  const impulses: Record<string, number> = {};
  for (const fid of controlFactors(vm.mapDoc)) {
    impulses[fid] = suggestion.doc.impulse[fid] ?? 0;
  }
  vm.draft = {
    name: `suggested-${vm.savedDrafts.length + 1}`,
    impulses,
    horizon: vm.draft.horizon,
    clamp: vm.draft.clamp,
  };
}

export function draftToScenario(draft: WhatIfDraft, controls: string[]): ScenarioBody {
  const schedule: Record<string, Record<string, number>> = { "0": {} };
  for (const fid of controls) {
    schedule["0"][fid] = draft.impulses[fid] ?? 0;
  }
  return {
    name: draft.name,
    controls,
    schedule,
    horizon: draft.horizon,
    clamp: draft.clamp,
  };
}

export function setWeightDraft(vm: ViewModel, source: string, target: string, weight: number): void {
  vm.weightDrafts[`${source}->${target}`] = weight;
}

/** The document a save would PUT: the loaded map plus pending weight tweaks.
 * Builds a new document; the loaded one stays untouched. */
export function documentWithWeightDrafts(vm: ViewModel): MapDoc {
  if (!vm.mapDoc) throw new Error("no map loaded");
  return {
    ...vm.mapDoc,
    factors: vm.mapDoc.factors.map((f) => ({ ...f })),
    edges: vm.mapDoc.edges.map((e) => ({
      ...e,
      weight: vm.weightDrafts[`${e.source}->${e.target}`] ?? e.weight,
    })),
  };
}
