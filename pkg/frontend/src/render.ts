// Pure renderers: state in, HTML/SVG strings out. No scoring, no sorting —
// each list renders in exactly the order the server returned it.

import type { GraphPanel, RecommendationCard, SearchPanel } from './session';
import type { ResultItem, SubgraphResponse } from './types';

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

const TYPE_COLORS: Record<string, string> = {
  FC: '#d1495b',
  PE: '#30638e',
  PS: '#3c6e47',
  LN: '#edae49',
};

export function nodeColor(type: string): string {
  return TYPE_COLORS[type] ?? '#666666';
}

function pathExplanation(item: ResultItem): string {
  if (item.base) {
    return '<span class="path-note">direct match</span>';
  }
  if (item.path.length === 0) {
    return '';
  }
  const steps = item.path
    .map(
      (step) =>
        `<li><code>${escapeHtml(step.category)}</code> × ${step.weight.toFixed(4)}</li>`,
    )
    .join('');
  return (
    '<details class="path"><summary>why related</summary>' +
    `<ul class="path-steps">${steps}</ul></details>`
  );
}

export function renderResultList(items: ResultItem[]): string {
  if (items.length === 0) {
    return '<p class="empty">no results</p>';
  }
  const rows = items
    .map(
      (item) =>
        '<li class="result">' +
        `<span class="score">${item.score.toFixed(4)}</span>` +
        `<span class="badge badge-${item.type}">${item.type}</span>` +
        `<span class="result-id">${escapeHtml(item.id)}</span>` +
        `<span class="result-label">${escapeHtml(item.label)}</span>` +
        pathExplanation(item) +
        '</li>',
    )
    .join('');
  return `<ol class="results">${rows}</ol>`;
}

export function renderSearchPanel(panel: SearchPanel | null): string {
  if (panel === null) {
    return '<p class="empty">enter a search above</p>';
  }
  const error = panel.error
    ? `<p class="error" role="alert">${escapeHtml(panel.error)}</p>`
    : '';
  const meta =
    `<p class="meta">query <code>${escapeHtml(panel.query)}</code>` +
    ` at depth ${panel.requestDepth}, limit ${panel.requestLimit}` +
    ` — ${panel.results.length} result(s)</p>`;
  return error + meta + renderResultList(panel.results);
}

export function renderCard(card: RecommendationCard): string {
  const error = card.error
    ? `<p class="error" role="alert">${escapeHtml(card.error)}</p>`
    : '';
  const body =
    card.results.length === 0 && !card.error
      ? '<p class="empty">no related failure cases at this depth</p>'
      : renderResultList(card.results);
  return (
    `<section class="card" data-element="${escapeHtml(card.elementId)}" ` +
    `data-depth="${card.requestDepth}" data-limit="${card.requestLimit}">` +
    `<header><h3>${escapeHtml(card.elementLabel)}</h3>` +
    `<span class="card-id">${escapeHtml(card.elementId)}</span>` +
    `<button class="remove" data-remove="${escapeHtml(card.elementId)}">remove</button>` +
    `</header>${error}${body}</section>`
  );
}

export function renderCards(elementIds: string[], cards: Record<string, RecommendationCard>): string {
  const sections = elementIds
    .map((id) => {
      const card = cards[id];
      return card
        ? renderCard(card)
        : `<section class="card card-loading" data-element="${escapeHtml(id)}">` +
            `<header><h3>${escapeHtml(id)}</h3></header><p class="empty">loading…</p></section>`;
    })
    .join('');
  return sections || '<p class="empty">insert a project element to get recommendations</p>';
}

interface LayoutPoint {
  x: number;
  y: number;
}

/** Deterministic circular layout; enough for radius<=2 neighborhoods. */
export function circularLayout(ids: string[], size = 420): Map<string, LayoutPoint> {
  const center = size / 2;
  const radius = ids.length > 1 ? center - 50 : 0;
  const points = new Map<string, LayoutPoint>();
  ids.forEach((id, index) => {
    const angle = (2 * Math.PI * index) / Math.max(1, ids.length);
    points.set(id, {
      x: center + radius * Math.cos(angle),
      y: center + radius * Math.sin(angle),
    });
  });
  return points;
}

export function renderSubgraphSvg(data: SubgraphResponse, size = 420): string {
  const ids = data.nodes.map((n) => n.id);
  const layout = circularLayout(ids, size);
  const edges = data.edges
    .map((edge) => {
      const a = layout.get(edge.a);
      const b = layout.get(edge.b);
      if (!a || !b) return '';
      const width = (0.5 + 2.5 * edge.weight).toFixed(2);
      return (
        `<line x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}" ` +
        `x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}" ` +
        `stroke="#9a9a9a" stroke-width="${width}">` +
        `<title>${escapeHtml(edge.category)} ${edge.weight.toFixed(3)}</title></line>`
      );
    })
    .join('');
  const nodes = data.nodes
    .map((node) => {
      const p = layout.get(node.id);
      if (!p) return '';
      const color = nodeColor(node.type);
      const shape =
        node.type === 'LN'
          ? `<rect x="${(p.x - 7).toFixed(1)}" y="${(p.y - 7).toFixed(1)}" width="14" height="14" ` +
            `transform="rotate(45 ${p.x.toFixed(1)} ${p.y.toFixed(1)})" fill="${color}" data-type="LN"/>`
          : `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="9" fill="${color}" data-type="${node.type}"/>`;
      return (
        `<g class="node" data-id="${escapeHtml(node.id)}">${shape}` +
        `<text x="${p.x.toFixed(1)}" y="${(p.y - 13).toFixed(1)}" text-anchor="middle">` +
        `${escapeHtml(node.label)}</text></g>`
      );
    })
    .join('');
  return (
    `<svg viewBox="0 0 ${size} ${size}" role="img" aria-label="graph neighborhood">` +
    `${edges}${nodes}</svg>`
  );
}

export function renderGraphPanel(panel: GraphPanel | null): string {
  if (panel === null) {
    return '<p class="empty">pick a node to explore its neighborhood</p>';
  }
  const meta =
    `<p class="meta">around <code>${escapeHtml(panel.nodeId)}</code> at radius ${panel.radius}: ` +
    `${panel.data.nodes.length} node(s), ${panel.data.edges.length} edge(s)</p>`;
  return meta + renderSubgraphSvg(panel.data);
}
