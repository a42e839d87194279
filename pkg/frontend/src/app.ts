/**
 * DOM wiring: source image | SMAP | DMAP | DDMAP side by side, with the
 * tuning button, the two percentage sliders and the quality curve.
 */

import { ApiClient } from "./api.js";
import { drawQualityCurve } from "./chart.js";
import { SessionController, type UiSessionState } from "./state.js";
import { attainableMaxPercent } from "./tables.js";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ??
  "http://127.0.0.1:8000";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const controller = new SessionController(new ApiClient(SERVICE_URL));

const fileInput = el<HTMLInputElement>("file-input");
const optimizeBtn = el<HTMLButtonElement>("optimize-btn");
const errorBanner = el<HTMLDivElement>("error-banner");
const statsLine = el<HTMLDivElement>("stats-line");
const tauLine = el<HTMLDivElement>("tau-line");
const sourcePane = el<HTMLImageElement>("source-img");
const smapPane = el<HTMLImageElement>("smap-img");
const dmapPane = el<HTMLImageElement>("dmap-img");
const ddmapPane = el<HTMLImageElement>("ddmap-img");
const coverageSlider = el<HTMLInputElement>("coverage-slider");
const coverageLabel = el<HTMLSpanElement>("coverage-label");
const defectSlider = el<HTMLInputElement>("defect-slider");
const defectLabel = el<HTMLSpanElement>("defect-label");
const curveCanvas = el<HTMLCanvasElement>("curve-canvas");

function fmt(value: number | null, digits = 2): string {
  return value === null ? "-" : value.toFixed(digits);
}

function render(state: UiSessionState): void {
  errorBanner.textContent = state.error ?? "";
  errorBanner.hidden = !state.error;

  optimizeBtn.disabled = state.phase !== "ready" && state.phase !== "optimized";
  const tuned = state.phase === "optimized";
  coverageSlider.disabled = !tuned || !state.tables?.h_prime;
  defectSlider.disabled = !tuned || !state.tables?.h_doubleprime;

  statsLine.textContent = state.stats
    ? `${state.width}x${state.height}, mean brightness ` +
      `${state.stats.mean_brightness.toFixed(2)}, ` +
      `tau max ${(state.stats.tau_max * 100).toFixed(2)}%`
    : "";

  tauLine.textContent =
    state.tauPercent !== null ? `tuned tau: ${state.tauPercent.toFixed(2)}%` : "";

  smapPane.src = state.smapUrl ?? "";
  smapPane.hidden = !state.smapUrl;
  dmapPane.src = state.dmap?.url ?? "";
  dmapPane.hidden = !state.dmap;
  ddmapPane.src = state.ddmap?.url ?? "";
  ddmapPane.hidden = !state.ddmap;

  if (state.tables?.h_prime) {
    const ceiling = attainableMaxPercent(state.tables.h_prime);
    coverageSlider.max = String(ceiling);
    coverageSlider.title = `attainable up to ${fmt(ceiling)}%`;
  }
  if (state.tables?.h_doubleprime) {
    defectSlider.max = String(state.tables.h_doubleprime.alpha_max);
  } else if (state.tables) {
    defectSlider.title = "no pixel is defective at any threshold";
  }

  coverageLabel.textContent = state.coverage
    ? `${fmt(state.coverage.percent)}% green -> tolerance ` +
      `${fmt(state.dmap?.tauPercent ?? null, 4)}%` +
      (state.dmap?.greenFraction != null
        ? ` (green fraction ${fmt(state.dmap.greenFraction * 100)}%)`
        : "")
    : "move the slider";

  defectLabel.textContent = state.defect
    ? `${fmt(state.defect.percent)}% red -> threshold ` +
      `${fmt(state.ddmap?.tauPercent ?? null, 4)}%`
    : "move the slider";

  if (state.curve) {
    drawQualityCurve(curveCanvas, state.curve, state.tauPercent);
  }
}

controller.onChange = render;

fileInput.addEventListener("change", () => {
  const file = fileInput.files?.[0];
  if (!file) return;
  sourcePane.src = URL.createObjectURL(file);
  sourcePane.hidden = false;
  void controller.upload(file, file.name);
});

optimizeBtn.addEventListener("click", () => {
  void controller.optimize();
});

coverageSlider.addEventListener("change", () => {
  void controller.setCoverage(Number(coverageSlider.value));
});

defectSlider.addEventListener("change", () => {
  void controller.setDefect(Number(defectSlider.value));
});

render(controller.state);
