import { ApiClient } from "./api";
import { Controller } from "./app";
import { renderControls, renderNotice, renderScript } from "./render";
import type { ViewModel } from "./viewmodel";

const client = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function bindView(controller: Controller) {
  return (vm: ViewModel) => {
    el("script-view").innerHTML = renderScript(vm);
    el("controls").innerHTML = renderControls(vm);
    el<HTMLButtonElement>("generate").onclick = () => void controller.generate();
    el<HTMLButtonElement>("add-manual").onclick = () => {
      const free = el<HTMLInputElement>("free-speaker").value.trim();
      const chosen = el<HTMLSelectElement>("speaker").value;
      const text = el<HTMLInputElement>("manual-text").value.trim();
      if (text) void controller.insertManual(free || chosen, text);
    };
    el<HTMLAnchorElement>("export-plain").href = controller.exportUrl("plain");
    el<HTMLAnchorElement>("export-structured").href = controller.exportUrl("structured");
    for (const button of document.querySelectorAll<HTMLButtonElement>("button.discard")) {
      button.onclick = () => void controller.discard(Number(button.dataset.lineId));
    }
  };
}

function notice(message: string) {
  const host = el("notices");
  const wrapper = document.createElement("div");
  wrapper.innerHTML = renderNotice(message);
  const node = wrapper.firstElementChild as HTMLElement;
  node.querySelector("button.dismiss")?.addEventListener("click", () => node.remove());
  host.appendChild(node);
}

async function start() {
  const form = el<HTMLFormElement>("start-form");
  form.onsubmit = async (event) => {
    event.preventDefault();
    const prompt = el<HTMLTextAreaElement>("prompt").value;
    try {
      const { id } = await client.createSession(prompt);
      const controller = new Controller(client, id, {
        onView: () => undefined,
        onNotice: notice,
        confirmDiscard: (lineId) =>
          window.confirm(`Discard line ${lineId} and everything after it?`),
      });
      controller.events.onView = bindView(controller);
      el("start").hidden = true;
      el("workspace").hidden = false;
      await controller.refresh();
    } catch (err) {
      notice(String(err));
    }
  };
}

void start();
