import type { LineRow, ViewModel } from "./viewmodel";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function renderRow(row: LineRow): string {
  const badge = `<span class="badge badge-${row.origin}">${row.origin}</span>`;
  const discard = row.discardable
    ? `<button class="discard" data-line-id="${row.id}" title="Discard this line and all after it">✕</button>`
    : "";
  const translation = row.translation
    ? `<td class="translation${row.translation.flagged ? " flagged" : ""}">` +
      escapeHtml(row.translation.text) +
      (row.translation.flagged ? ' <span class="flag" title="Untranslated">⚠</span>' : "") +
      "</td>"
    : '<td class="translation"></td>';
  return (
    `<tr data-line-id="${row.id}">` +
    `<td class="source">${badge} ${escapeHtml(row.label)} ${discard}</td>` +
    translation +
    "</tr>"
  );
}

export function renderScript(vm: ViewModel): string {
  const setting = vm.setting
    ? `<div class="setting">${escapeHtml(vm.setting)}</div>`
    : "";
  const rows = vm.rows.map(renderRow).join("");
  return `${setting}<table class="script"><tbody>${rows}</tbody></table>`;
}

export function renderControls(vm: ViewModel): string {
  const options = vm.characters
    .map((c) => `<option value="${escapeHtml(c)}">${escapeHtml(c)}</option>`)
    .join("");
  const disabled = vm.generateDisabled ? " disabled" : "";
  return (
    `<button id="generate"${disabled}>Next line</button>` +
    `<select id="speaker">${options}</select>` +
    `<input id="free-speaker" placeholder="or new character" />` +
    `<input id="manual-text" placeholder="manual line" />` +
    `<button id="add-manual">Add</button>` +
    `<a id="export-plain" download="script.txt">Export text</a>` +
    `<a id="export-structured" download="session.json">Export JSON</a>` +
    `<span class="fraction">generated: ${(vm.generatedFraction * 100).toFixed(0)}%</span>`
  );
}

export function renderNotice(message: string): string {
  return `<div class="notice">${escapeHtml(message)}<button class="dismiss">×</button></div>`;
}
