/**
 * DOM shell for the calibration bench. All logic lives in the controller and
 * session modules; this file only binds elements and renders bytes the
 * service returned.
 */

import { ApiClient } from "./api.js";
import { BenchController, BenchView } from "./bench.js";
import {
  ALPHA_RANGE,
  DISTANCE_RANGE,
  SIGMA_RANGE,
  ScaleControl,
} from "./config.js";
import { CalibrationSession, SessionExport } from "./session.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setImage(img: HTMLImageElement, png: Uint8Array): void {
  const old = img.src;
  img.src = URL.createObjectURL(new Blob([png.slice().buffer], { type: "image/png" }));
  if (old.startsWith("blob:")) URL.revokeObjectURL(old);
}

function bindRange(
  input: HTMLInputElement,
  range: { min: number; max: number; step: number },
  value: number,
): void {
  input.min = String(range.min);
  input.max = String(range.max);
  input.step = String(range.step);
  input.value = String(value);
}

export function boot(baseUrl: string): void {
  const session = new CalibrationSession();
  const client = new ApiClient(baseUrl);

  const originalImg = el<HTMLImageElement>("original");
  const compensatedImg = el<HTMLImageElement>("compensated");
  const resolvedPre = el<HTMLPreElement>("resolved");
  const errorBox = el<HTMLElement>("error");

  const view: BenchView = {
    showOriginal: (png) => setImage(originalImg, png),
    showCompensated: (png) => {
      setImage(compensatedImg, png);
      errorBox.textContent = "";
    },
    showResolved: (resolved) => {
      resolvedPre.textContent = JSON.stringify(resolved, null, 2);
    },
    showError: (message) => {
      errorBox.textContent = message;
    },
  };
  const controller = new BenchController(client, session, view);

  const alphaSlider = el<HTMLInputElement>("alpha");
  const alphaLabel = el<HTMLElement>("alpha-value");
  const sigmaSlider = el<HTMLInputElement>("sigma");
  const sigmaLabel = el<HTMLElement>("sigma-value");
  const distanceSlider = el<HTMLInputElement>("distance");
  const distanceLabel = el<HTMLElement>("distance-value");
  const scaleSelect = el<HTMLSelectElement>("scale-control");
  const patternSelect = el<HTMLSelectElement>("pattern");
  const abToggle = el<HTMLButtonElement>("ab-toggle");
  const sideBySide = el<HTMLElement>("side-by-side");
  const noteInput = el<HTMLInputElement>("brightness-note");

  const params = session.params;
  bindRange(alphaSlider, ALPHA_RANGE, params.alpha);
  bindRange(sigmaSlider, SIGMA_RANGE, params.sigmaPx);
  bindRange(distanceSlider, DISTANCE_RANGE, params.distanceIn);

  const refreshLabels = () => {
    const p = session.params;
    alphaLabel.textContent = p.alpha.toFixed(3);
    sigmaLabel.textContent = session.sigmaPx().toFixed(2);
    distanceLabel.textContent = `${p.distanceIn.toFixed(0)} in`;
    sigmaSlider.disabled = p.scaleControl !== "sigma";
    distanceSlider.disabled = p.scaleControl !== "distance";
  };

  alphaSlider.addEventListener("input", () => {
    controller.onParamChange({ alpha: Number(alphaSlider.value) });
    refreshLabels();
  });
  sigmaSlider.addEventListener("input", () => {
    controller.onParamChange({ sigmaPx: Number(sigmaSlider.value) });
    refreshLabels();
  });
  distanceSlider.addEventListener("input", () => {
    controller.onParamChange({ distanceIn: Number(distanceSlider.value) });
    refreshLabels();
  });
  scaleSelect.addEventListener("change", () => {
    controller.onParamChange({ scaleControl: scaleSelect.value as ScaleControl });
    refreshLabels();
  });
  patternSelect.addEventListener("change", () => {
    void controller.selectPattern(patternSelect.value);
  });
  noteInput.addEventListener("change", () => {
    session.brightnessNote = noteInput.value;
  });

  // A/B flicker comparison: one image visible at a time, toggled in place.
  let showingOriginal = false;
  abToggle.addEventListener("click", () => {
    showingOriginal = !showingOriginal;
    sideBySide.classList.toggle("ab-mode", true);
    originalImg.style.display = showingOriginal ? "" : "none";
    compensatedImg.style.display = showingOriginal ? "none" : "";
    abToggle.textContent = showingOriginal ? "showing: original" : "showing: compensated";
  });
  el<HTMLButtonElement>("side-mode").addEventListener("click", () => {
    sideBySide.classList.toggle("ab-mode", false);
    originalImg.style.display = "";
    compensatedImg.style.display = "";
  });

  el<HTMLButtonElement>("export").addEventListener("click", () => {
    const doc = session.exportSession();
    const blob = new Blob([JSON.stringify(doc, null, 2)], { type: "application/json" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "calibration-session.json";
    link.click();
    URL.revokeObjectURL(link.href);
  });

  el<HTMLInputElement>("import").addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (!file) return;
    try {
      const doc = JSON.parse(await file.text()) as SessionExport;
      const restored = CalibrationSession.importSession(doc);
      const p = restored.params;
      alphaSlider.value = String(p.alpha);
      sigmaSlider.value = String(p.sigmaPx);
      distanceSlider.value = String(p.distanceIn);
      scaleSelect.value = p.scaleControl;
      patternSelect.value = restored.pattern;
      noteInput.value = restored.brightnessNote;
      controller.onParamChange(p);
      refreshLabels();
    } catch (err) {
      view.showError(err instanceof Error ? err.message : String(err));
    }
  });

  void (async () => {
    const names = await client.patterns();
    patternSelect.replaceChildren(
      ...names.map((name) => new Option(name, name, name === session.pattern, name === session.pattern)),
    );
    refreshLabels();
    await controller.selectPattern(session.pattern);
  })();
}

declare global {
  interface Window {
    latcompBoot: typeof boot;
  }
}

if (typeof window !== "undefined") {
  window.latcompBoot = boot;
}
