// Application shell: wires the capture -> detect -> advise flow, the KB
// browser, the language toggle and the feedback form to the DOM.

import { AdvisoryApi, ApiError, type AdvisoryResponse, type CorrectionDto, type RemedyDto } from "./api.js";
import { FeedbackQueue } from "./feedback.js";
import { entryDisplayName, I18n, type I18nKey } from "./i18n.js";
import { KbCache } from "./kbCache.js";
import { drawDetections } from "./overlay.js";

interface SessionState {
  selectedImage: File | null;
  lastResponse: AdvisoryResponse | null;
  detectInFlight: boolean;
}

const api = new AdvisoryApi("");
const i18n = new I18n(localStorage);
const kbCache = new KbCache(localStorage);
const feedbackQueue = new FeedbackQueue(localStorage);
const session: SessionState = { selectedImage: null, lastResponse: null, detectInFlight: false };

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const fileInput = el<HTMLInputElement>("file-input");
const detectButton = el<HTMLButtonElement>("detect-button");
const syncButton = el<HTMLButtonElement>("sync-button");
const languageButton = el<HTMLButtonElement>("language-button");
const statusLine = el<HTMLParagraphElement>("status-line");
const banner = el<HTMLDivElement>("offline-banner");
const photo = el<HTMLImageElement>("photo");
const overlayCanvas = el<HTMLCanvasElement>("overlay");
const remedyPanel = el<HTMLDivElement>("remedy-panel");
const kbList = el<HTMLDivElement>("kb-list");
const feedbackForm = el<HTMLFormElement>("feedback-form");
const feedbackSlug = el<HTMLSelectElement>("feedback-slug");
const feedbackComment = el<HTMLInputElement>("feedback-comment");

function setStatus(text: string): void {
  statusLine.textContent = text;
}

function applyStaticText(): void {
  document.title = i18n.t("app.title");
  el<HTMLHeadingElement>("app-title").textContent = i18n.t("app.title");
  el<HTMLParagraphElement>("app-tagline").textContent = i18n.t("app.tagline");
  el<HTMLLabelElement>("file-label").textContent = i18n.t("action.chooseImage");
  detectButton.textContent = i18n.t(session.detectInFlight ? "action.detecting" : "action.detect");
  syncButton.textContent = i18n.t("action.sync");
  languageButton.textContent = i18n.t("action.toggleLanguage");
  el<HTMLHeadingElement>("kb-title").textContent = i18n.t("kb.browserTitle");
  el<HTMLSpanElement>("feedback-legend").textContent = i18n.t("feedback.markWrong");
  el<HTMLLabelElement>("feedback-slug-label").textContent = i18n.t("feedback.actualDisease");
  el<HTMLLabelElement>("feedback-comment-label").textContent = i18n.t("feedback.comment");
  el<HTMLButtonElement>("feedback-submit").textContent = i18n.t("action.submitFeedback");
  banner.textContent = i18n.t("status.offline");
}

function updateOnlineState(): void {
  banner.hidden = navigator.onLine;
}

// --- overlay ---------------------------------------------------------------

function redrawOverlay(): void {
  const response = session.lastResponse;
  const width = photo.clientWidth;
  const height = photo.clientHeight;
  if (!response || width === 0) {
    overlayCanvas.width = 0;
    overlayCanvas.height = 0;
    return;
  }
  overlayCanvas.width = width;
  overlayCanvas.height = height;
  const ctx = overlayCanvas.getContext("2d");
  if (!ctx) return;
  drawDetections(ctx, response.detections, width, height, (det) =>
    entryDisplayName(det, i18n.locale),
  );
}

// --- remedy panel ----------------------------------------------------------

function renderSections(doc: RemedyDto): HTMLElement {
  const card = document.createElement("article");
  card.className = "remedy-card";

  const heading = document.createElement("h3");
  heading.textContent = doc.name ?? doc.slug;
  card.appendChild(heading);

  if (doc.no_remedy_defined) {
    const note = document.createElement("p");
    note.textContent = i18n.t("kb.noRemedy");
    card.appendChild(note);
    return card;
  }
  if (doc.draft) {
    const note = document.createElement("p");
    note.className = "draft-notice";
    note.textContent = i18n.t("kb.draftNotice");
    card.appendChild(note);
  }

  const sections: Array<[I18nKey, string[] | undefined]> = [
    ["section.symptoms", doc.symptoms],
    ["section.prevention", doc.prevention],
    ["section.remedy", doc.remedy],
  ];
  for (const [titleKey, paragraphs] of sections) {
    if (!paragraphs || paragraphs.length === 0) continue;
    const title = document.createElement("h4");
    title.textContent = i18n.t(titleKey);
    card.appendChild(title);
    for (const text of paragraphs) {
      const p = document.createElement("p");
      p.textContent = text;
      card.appendChild(p);
    }
  }
  return card;
}

function renderRemedies(response: AdvisoryResponse): void {
  remedyPanel.replaceChildren();
  if (response.detections.length === 0) {
    const none = document.createElement("p");
    none.textContent = i18n.t("status.noDisease");
    remedyPanel.appendChild(none);
    return;
  }
  for (const doc of response.remedies) {
    remedyPanel.appendChild(renderSections(doc));
  }
}

// --- detect flow -----------------------------------------------------------

async function runDetect(): Promise<void> {
  if (session.detectInFlight || !session.selectedImage) return;
  session.detectInFlight = true;
  detectButton.disabled = true;
  detectButton.textContent = i18n.t("action.detecting");
  try {
    const response = await api.detect(session.selectedImage, { lang: i18n.locale });
    session.lastResponse = response;
    redrawOverlay();
    renderRemedies(response);
    populateFeedbackChoices(response);
    setStatus(
      response.detections.length === 0
        ? i18n.t("status.noDisease")
        : `${response.detections.length} ✓`,
    );
  } catch (err) {
    if (err instanceof ApiError) {
      setStatus(`${i18n.t("status.detectFailed")}: ${err.code} — ${err.message}`);
    } else {
      setStatus(i18n.t("status.offline"));
      banner.hidden = false;
    }
  } finally {
    session.detectInFlight = false;
    detectButton.disabled = !session.selectedImage;
    detectButton.textContent = i18n.t("action.detect");
  }
}

// --- KB browser ------------------------------------------------------------

function renderKbList(): void {
  kbList.replaceChildren();
  for (const [slug, entry] of kbCache.entries()) {
    const item = document.createElement("details");
    const summary = document.createElement("summary");
    summary.textContent = entryDisplayName(entry, i18n.locale);
    item.appendChild(summary);
    item.appendChild(
      renderSections({
        slug,
        name: entryDisplayName(entry, i18n.locale),
        symptoms: entry.symptoms,
        prevention: entry.prevention,
        remedy: entry.remedy,
        draft: entry.draft,
      }),
    );
    kbList.appendChild(item);
  }
}

async function runSync(): Promise<void> {
  try {
    const result = await kbCache.sync(api);
    renderKbList();
    setStatus(i18n.t("status.kbSynced", { version: result.version }));
  } catch {
    setStatus(i18n.t("status.kbSyncFailed"));
  }
}

// --- feedback --------------------------------------------------------------

function populateFeedbackChoices(response: AdvisoryResponse): void {
  feedbackSlug.replaceChildren();
  const noDisease = document.createElement("option");
  noDisease.value = "";
  noDisease.textContent = i18n.t("feedback.noDiseaseOption");
  feedbackSlug.appendChild(noDisease);
  for (const [slug, entry] of kbCache.entries()) {
    const option = document.createElement("option");
    option.value = slug;
    option.textContent = entryDisplayName(entry, i18n.locale);
    feedbackSlug.appendChild(option);
  }
  feedbackForm.hidden = response.detections.length === 0;
}

async function submitCorrection(event: Event): Promise<void> {
  event.preventDefault();
  const response = session.lastResponse;
  if (!response) return;
  const corrected: CorrectionDto[] | "no disease" = feedbackSlug.value
    ? [{ slug: feedbackSlug.value }]
    : "no disease";
  const draft = {
    request_id: response.request_id,
    original_detections: response.detections,
    corrected_labels: corrected,
    comment: feedbackComment.value || undefined,
    locale: i18n.locale,
  };
  try {
    const outcome = await feedbackQueue.submit(api, draft, navigator.onLine);
    if ("id" in outcome) {
      setStatus(i18n.t("status.feedbackSent", { id: outcome.id }));
    } else {
      setStatus(i18n.t("status.feedbackQueued", { count: outcome.queued }));
    }
  } catch (err) {
    if (err instanceof ApiError) {
      setStatus(i18n.t("status.feedbackRejected", { message: `${err.code}: ${err.message}` }));
    }
  }
}

async function flushFeedback(): Promise<void> {
  if (feedbackQueue.size === 0) return;
  const outcome = await feedbackQueue.flush(api);
  if (outcome.delivered.length > 0) {
    setStatus(i18n.t("status.feedbackFlushed", { count: outcome.delivered.length }));
  }
  for (const rejection of outcome.rejected) {
    setStatus(i18n.t("status.feedbackRejected", { message: `${rejection.code}: ${rejection.message}` }));
  }
}

// --- wiring ----------------------------------------------------------------

fileInput.addEventListener("change", () => {
  const file = fileInput.files?.[0] ?? null;
  session.selectedImage = file;
  session.lastResponse = null;
  redrawOverlay();
  remedyPanel.replaceChildren();
  feedbackForm.hidden = true;
  detectButton.disabled = !file;
  if (file) photo.src = URL.createObjectURL(file);
});

photo.addEventListener("load", redrawOverlay);
window.addEventListener("resize", redrawOverlay);
detectButton.addEventListener("click", () => void runDetect());
syncButton.addEventListener("click", () => void runSync());
feedbackForm.addEventListener("submit", (event) => void submitCorrection(event));

languageButton.addEventListener("click", () => {
  i18n.toggle();
  applyStaticText();
  renderKbList();
  redrawOverlay();
  if (session.lastResponse) {
    // re-fetch nothing: remedies re-render from the cached KB in the new language
    populateFeedbackChoices(session.lastResponse);
  }
});

window.addEventListener("online", () => {
  updateOnlineState();
  void flushFeedback();
  void runSync();
});
window.addEventListener("offline", updateOnlineState);

if ("serviceWorker" in navigator) {
  void navigator.serviceWorker.register("dist/sw.js");
}

applyStaticText();
updateOnlineState();
renderKbList();
detectButton.disabled = true;
feedbackForm.hidden = true;
if (navigator.onLine) {
  void runSync();
  void flushFeedback();
}
