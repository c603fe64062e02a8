import init, { invariants, compareCodes, gammaTable } from './pkg/qmatroid_wasm.js';

const field128 = { q: 2, m: 7, modulus: [1, 1, 0, 0, 0, 0, 0, 1] };

const presets = {
  gf128a: {
    kind: 'represented',
    field: field128,
    generator: [
      ['1', '0', '0', 'w^65', 'w^85'],
      ['0', '1', '0', 'w^37', 'w^72'],
      ['0', '0', '1', 'w^124', 'w^118'],
    ],
  },
  gf128b: {
    kind: 'represented',
    field: field128,
    generator: [
      ['1', '0', '0', 'w^26', 'w^64'],
      ['0', '1', '0', 'w^27', 'w^20'],
      ['0', '0', '1', 'w^50', 'w^92'],
    ],
  },
  uniform: { kind: 'uniform', q: 3, k: 2, n: 4 },
  spread: {
    kind: 'spread',
    q: 2,
    n: 4,
    members: [
      [[1, 0, 0, 0], [0, 1, 0, 0]],
      [[0, 0, 1, 0], [0, 0, 0, 1]],
      [[1, 0, 1, 0], [0, 1, 0, 1]],
      [[1, 0, 0, 1], [0, 1, 1, 1]],
      [[1, 0, 1, 1], [0, 1, 1, 0]],
    ],
  },
};

const $ = (id) => document.getElementById(id);
const pretty = (v) => JSON.stringify(v, null, 2);

function show(out, f) {
  out.classList.remove('error');
  try {
    out.textContent = f();
  } catch (e) {
    out.classList.add('error');
    out.textContent = String(e);
  }
}

function runInvariants() {
  show($('invariants-out'), () => {
    const r = JSON.parse(invariants($('descriptor').value));
    return [
      `q = ${r.q}, n = ${r.n}, k = ${r.k}`,
      `Whitney function:         ${r.whitney}`,
      `characteristic polynomial: ${r.char_poly}`,
      `Tutte polynomial:         ${r.tutte}`,
      `smallest m:               ${r.min_m ?? 'none up to the cap'}`,
    ].join('\n');
  });
}

function runCompare() {
  show($('compare-out'), () => {
    const r = JSON.parse(compareCodes($('code-a').value, $('code-b').value));
    const lines = [
      `Whitney A: ${r.whitney[0]}`,
      `Whitney B: ${r.whitney[1]}`,
      `same Whitney function: ${r.same_whitney}`,
      '',
    ];
    r.enumerators[0].forEach((w, t) => {
      lines.push(`W^(${t})  A: ${w}`);
      lines.push(`        B: ${r.enumerators[1][t] ?? '-'}`);
    });
    lines.push('', `same higher weight enumerators: ${r.same_enumerators}`);
    return lines.join('\n');
  });
}

function runGamma() {
  const out = $('gamma-out');
  out.classList.remove('error');
  try {
    const r = JSON.parse(gammaTable(Number($('gamma-q').value), Number($('gamma-n').value)));
    const head = ['r \\ i', ...Array.from({ length: r.points + 1 }, (_, i) => i)];
    const rows = r.rows.map((row, rr) => [rr, ...row]);
    const cells = (cols, tag) => `<tr>${cols.map((c) => `<${tag}>${c}</${tag}>`).join('')}</tr>`;
    out.innerHTML = `<table>${cells(head, 'th')}${rows.map((row) => cells(row, 'td')).join('')}</table>`;
  } catch (e) {
    out.classList.add('error');
    out.textContent = String(e);
  }
}

await init();
$('status').textContent = 'Ready. All arithmetic is exact and runs locally.';
$('descriptor').value = pretty(presets.gf128a);
$('code-a').value = pretty(presets.gf128a);
$('code-b').value = pretty(presets.gf128b);
document.querySelectorAll('[data-preset]').forEach((b) =>
  b.addEventListener('click', () => {
    $('descriptor').value = pretty(presets[b.dataset.preset]);
  }),
);
$('run-invariants').addEventListener('click', runInvariants);
$('run-compare').addEventListener('click', runCompare);
$('run-gamma').addEventListener('click', runGamma);
