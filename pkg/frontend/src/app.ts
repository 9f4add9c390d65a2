/** Studio shell: palette on the left, preview canvas center, sliders right. */

import { StudioApi, ApiError } from "./api.js";
import { Catalog } from "./catalog.js";
import { EditorState } from "./editor.js";
import { PreviewScheduler } from "./preview.js";
import type { Layer, StyleDocument } from "./types.js";

const params = new URLSearchParams(location.search);
const API_BASE = params.get("api") ?? "http://127.0.0.1:8023";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text) node.textContent = text;
  return node;
}

function byId<T extends HTMLElement>(id: string): T {
  return document.getElementById(id) as T;
}

async function boot(): Promise<void> {
  const api = new StudioApi(API_BASE, params.get("session") ?? "default");
  const statusBar = byId<HTMLDivElement>("status");

  const setStatus = (text: string, isError = false) => {
    statusBar.textContent = text;
    statusBar.className = isError ? "error" : "";
  };

  let catalog: Catalog;
  try {
    catalog = new Catalog(await api.getCatalog());
  } catch (err) {
    setStatus(`cannot reach the service at ${API_BASE}: ${String(err)}`, true);
    return;
  }

  const editor = new EditorState(catalog);
  let imageId: string | null = null;

  const scheduler = new PreviewScheduler(
    async () => {
      if (imageId === null || editor.validationErrors().length > 0) return null;
      try {
        const blob = await api.preview(imageId, editor.toDocument());
        setStatus("");
        return blob;
      } catch (err) {
        if (err instanceof ApiError) {
          setStatus(`${err.code}: ${err.message} ${err.details.join("; ")}`, true);
        }
        return null;
      }
    },
    (blob) => {
      const img = byId<HTMLImageElement>("preview");
      const url = URL.createObjectURL(blob);
      img.onload = () => URL.revokeObjectURL(url);
      img.src = url;
    },
  );

  // ---- palette --------------------------------------------------------
  const palette = byId<HTMLDivElement>("palette");
  for (const group of catalog.palette()) {
    palette.appendChild(el("h3", {}, group.label));
    for (const entry of group.entries) {
      const button = el("button", { class: "block-btn" }, entry.kind);
      if (!entry.known) {
        button.disabled = true;
        button.title = "unrecognized block kind";
      } else {
        button.addEventListener("click", () => editor.addBlock(entry.kind));
      }
      palette.appendChild(button);
    }
  }

  // ---- chain flow ------------------------------------------------------
  const chainDiv = byId<HTMLDivElement>("chain");

  function renderChain(): void {
    chainDiv.replaceChildren();
    const blocks = editor.chain();
    const errors = editor.validationErrors();
    blocks.forEach((block, i) => {
      const item = el("div", { class: "chain-item", draggable: "true" });
      if (i === editor.selected) item.classList.add("selected");
      const blockErrors = errors.filter((e) => e.startsWith(`${editor.activeLayer}[${i}]`));
      if (blockErrors.length > 0) {
        item.classList.add("invalid");
        item.title = blockErrors.join("\n");
      }
      item.appendChild(el("span", { class: "kind" }, block.kind));
      const up = el("button", {}, "↑");
      up.addEventListener("click", (e) => { e.stopPropagation(); editor.moveBlock(i, i - 1); });
      const down = el("button", {}, "↓");
      down.addEventListener("click", (e) => { e.stopPropagation(); editor.moveBlock(i, i + 1); });
      const rm = el("button", {}, "✕");
      rm.addEventListener("click", (e) => { e.stopPropagation(); editor.removeBlock(i); });
      item.append(up, down, rm);
      item.addEventListener("click", () => {
        editor.selected = i;
        renderChain();
        renderSliders();
      });
      item.addEventListener("dragstart", (e) => {
        e.dataTransfer?.setData("text/plain", String(i));
      });
      item.addEventListener("dragover", (e) => e.preventDefault());
      item.addEventListener("drop", (e) => {
        e.preventDefault();
        const from = Number(e.dataTransfer?.getData("text/plain"));
        if (!Number.isNaN(from)) editor.moveBlock(from, i);
      });
      chainDiv.appendChild(item);
    });
    const chainErrors = errors.filter((e) => !/\[\d+\]/.test(e));
    byId<HTMLDivElement>("chain-errors").textContent = chainErrors.join("; ");
  }

  // ---- sliders ---------------------------------------------------------
  const slidersDiv = byId<HTMLDivElement>("sliders");

  function renderSliders(): void {
    slidersDiv.replaceChildren();
    const block = editor.chain()[editor.selected];
    if (!block) return;
    slidersDiv.appendChild(el("h3", {}, block.kind));
    for (const p of catalog.params(block.kind)) {
      const row = el("div", { class: "slider-row" });
      row.appendChild(el("label", {}, p.name));
      const slider = el("input", {
        type: "range", min: String(p.min), max: String(p.max), step: String(p.step),
        value: String(block.params[p.name] ?? p.default),
      });
      const number = el("input", {
        type: "number", min: String(p.min), max: String(p.max), step: String(p.step),
        value: String(block.params[p.name] ?? p.default),
      });
      const apply = (raw: string) => {
        const value = Number(raw);
        if (Number.isNaN(value)) return;
        slider.value = raw;
        number.value = raw;
        editor.setParam(editor.selected, p.name, value);
      };
      slider.addEventListener("input", () => apply(slider.value));
      number.addEventListener("change", () => apply(number.value));
      row.append(slider, number);
      slidersDiv.appendChild(row);
    }
  }

  // ---- layer tabs ------------------------------------------------------
  for (const layer of ["background", "foreground"] as Layer[]) {
    byId<HTMLButtonElement>(`tab-${layer}`).addEventListener("click", () => {
      editor.setLayer(layer);
      byId("tab-background").classList.toggle("active", layer === "background");
      byId("tab-foreground").classList.toggle("active", layer === "foreground");
    });
  }

  // ---- image upload ----------------------------------------------------
  byId<HTMLInputElement>("upload").addEventListener("change", async (e) => {
    const input = e.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      imageId = await api.uploadImage(file, file.name);
      setStatus(`image ${imageId}`);
      scheduler.schedule();
    } catch (err) {
      setStatus(String(err), true);
    }
  });

  // ---- styles ----------------------------------------------------------
  async function refreshStyleList(): Promise<void> {
    const select = byId<HTMLSelectElement>("style-list");
    const styles = await api.listStyles();
    select.replaceChildren(el("option", { value: "" }, "load style…"));
    for (const s of styles) {
      select.appendChild(el("option", { value: s.name }, `${s.name} (v${s.version})`));
    }
  }

  byId<HTMLButtonElement>("save").addEventListener("click", async () => {
    const name = byId<HTMLInputElement>("style-name").value.trim();
    if (!name) {
      setStatus("give the style a name first", true);
      return;
    }
    editor.styleName = name;
    try {
      const saved = await api.saveStyle(name, editor.toDocument());
      editor.dirty = false;
      setStatus(`saved ${saved.name} v${saved.version}`);
      await refreshStyleList();
    } catch (err) {
      if (err instanceof ApiError) setStatus(`${err.code}: ${err.details.join("; ")}`, true);
    }
  });

  byId<HTMLSelectElement>("style-list").addEventListener("change", async (e) => {
    const name = (e.target as HTMLSelectElement).value;
    if (!name) return;
    const doc = (await api.getStyle(name)) as StyleDocument;
    editor.loadDocument(doc);
    byId<HTMLInputElement>("style-name").value = doc.name;
    scheduler.schedule();
  });

  byId<HTMLButtonElement>("randomize").addEventListener("click", async () => {
    const seed = Math.floor(Math.random() * 2 ** 31);
    const [doc] = await api.randomize(seed, 1);
    editor.loadDocument(doc);
    byId<HTMLInputElement>("style-name").value = doc.name;
    setStatus(`randomized (seed ${seed})`);
    scheduler.schedule();
  });

  // ---- gallery ---------------------------------------------------------
  byId<HTMLButtonElement>("gallery").addEventListener("click", async () => {
    const grid = byId<HTMLDivElement>("gallery-grid");
    if (imageId === null) {
      setStatus("upload at least one image first", true);
      return;
    }
    const count = Number(byId<HTMLInputElement>("gallery-count").value) || 14;
    try {
      const pages = await api.makeStoryboards([imageId], count, Date.now() % 100000);
      grid.replaceChildren();
      for (const page of pages) {
        const card = el("figure", { class: "page-card" });
        const img = el("img", { src: api.pageUrl(page.page_ref), loading: "lazy" });
        card.appendChild(img);
        card.appendChild(el("figcaption", {}, `${page.layout_id} · ${page.style_name}`));
        grid.appendChild(card);
      }
    } catch (err) {
      if (err instanceof ApiError) setStatus(`${err.code}: ${err.message}`, true);
    }
  });

  editor.onChange(() => {
    renderChain();
    renderSliders();
    scheduler.schedule();
  });
  editor.setLayer("background");
  renderChain();
  await refreshStyleList().catch(() => undefined);
  setStatus(`connected to ${API_BASE}`);
}

boot();
