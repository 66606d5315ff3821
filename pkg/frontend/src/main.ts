// Browser bootstrap: wires the session store to the DOM. All behavior lives
// in session.ts / render.ts; this file is glue only.

import { ApiClient } from './api';
import { renderCards, renderGraphPanel, renderSearchPanel } from './render';
import { DEPTH_MAX, DEPTH_MIN, Session } from './session';
import type { DocType } from './types';

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

export function bootstrap(): void {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get('service') ?? 'http://127.0.0.1:8000';
  const session = new Session(new ApiClient(baseUrl));

  const searchPanel = el<HTMLDivElement>('search-panel');
  const cardsPanel = el<HTMLDivElement>('cards-panel');
  const graphPanel = el<HTMLDivElement>('graph-panel');
  const noticeBox = el<HTMLParagraphElement>('notice');
  const depthSlider = el<HTMLInputElement>('depth');
  const depthValue = el<HTMLSpanElement>('depth-value');
  const limitInput = el<HTMLInputElement>('limit');

  depthSlider.min = String(DEPTH_MIN);
  depthSlider.max = String(DEPTH_MAX);
  depthSlider.value = String(session.state.depth);
  limitInput.value = String(session.state.limit);

  session.subscribe(() => {
    searchPanel.innerHTML = renderSearchPanel(session.state.search);
    cardsPanel.innerHTML = renderCards(session.state.insertedElements, session.state.cards);
    graphPanel.innerHTML = renderGraphPanel(session.state.graph);
    noticeBox.textContent = session.state.notice ?? '';
    depthValue.textContent = String(session.state.depth);
  });

  el<HTMLFormElement>('search-form').addEventListener('submit', (event) => {
    event.preventDefault();
    const query = el<HTMLInputElement>('query').value;
    void session.performSearch(query);
  });

  el<HTMLFormElement>('insert-form').addEventListener('submit', (event) => {
    event.preventDefault();
    const input = el<HTMLInputElement>('element-id');
    void session.insertElement(input.value.trim());
    input.value = '';
  });

  el<HTMLFormElement>('graph-form').addEventListener('submit', (event) => {
    event.preventDefault();
    const node = el<HTMLInputElement>('graph-node').value.trim();
    const radius = Number(el<HTMLInputElement>('graph-radius').value);
    void session.exploreNeighborhood(node, radius);
  });

  depthSlider.addEventListener('change', () => {
    void session.setDepth(Number(depthSlider.value));
  });

  limitInput.addEventListener('change', () => {
    void session.setLimit(Number(limitInput.value));
  });

  for (const type of ['FC', 'PE', 'PS'] as DocType[]) {
    el<HTMLInputElement>(`type-${type}`).addEventListener('change', () => {
      const selected = (['FC', 'PE', 'PS'] as DocType[]).filter(
        (t) => el<HTMLInputElement>(`type-${t}`).checked,
      );
      void session.setTypeFilter(selected.length > 0 ? selected : ['FC']);
    });
  }

  cardsPanel.addEventListener('click', (event) => {
    const target = event.target as HTMLElement;
    const removeId = target.getAttribute('data-remove');
    if (removeId) session.removeElement(removeId);
  });
}

if (typeof document !== 'undefined' && document.getElementById('search-panel')) {
  bootstrap();
}
