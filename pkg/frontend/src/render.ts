import { BoardViewModel, CopToken, MoveStager } from './viewmodel';

const ARC_COLORS: Record<string, string> = {
  green: '#2f9e44',
  spoke: '#868e96',
  chain: '#4263eb',
  other: '#adb5bd',
};

const VERTEX_RADIUS = 2.2;
const TOKEN_RADIUS = 7;
const PICK_RADIUS = 12; // px

interface Camera {
  x: number; // world coords of the viewport center
  y: number;
  scale: number;
}

/** Canvas renderer with pan/zoom. Pure presentation: every highlight is a
 * legal-move list from the server, every token a position from the view. */
export class BoardRenderer {
  private cam: Camera = { x: 0, y: 0, scale: 1 };
  private dragging = false;
  private lastMouse: [number, number] = [0, 0];

  constructor(
    private canvas: HTMLCanvasElement,
    private vm: BoardViewModel,
    private stager: MoveStager,
    private onVertexClick: (v: number) => void,
  ) {
    this.fit();
    canvas.addEventListener('wheel', (e) => this.onWheel(e), { passive: false });
    canvas.addEventListener('mousedown', (e) => {
      this.dragging = true;
      this.lastMouse = [e.offsetX, e.offsetY];
    });
    canvas.addEventListener('mousemove', (e) => {
      if (!this.dragging) return;
      this.cam.x -= (e.offsetX - this.lastMouse[0]) / this.cam.scale;
      this.cam.y -= (e.offsetY - this.lastMouse[1]) / this.cam.scale;
      this.lastMouse = [e.offsetX, e.offsetY];
      this.draw();
    });
    canvas.addEventListener('mouseup', (e) => {
      this.dragging = false;
      const v = this.pick(e.offsetX, e.offsetY);
      if (v !== null) this.onVertexClick(v);
    });
    canvas.addEventListener('mouseleave', () => {
      this.dragging = false;
    });
  }

  /** fit the whole arena into the canvas */
  fit() {
    const pts = this.vm.drawnVertices.map((v) => this.vm.arena.layout[v]);
    let minX = Infinity, minY = Infinity, maxX = -Infinity, maxY = -Infinity;
    for (const [x, y] of pts) {
      minX = Math.min(minX, x);
      minY = Math.min(minY, y);
      maxX = Math.max(maxX, x);
      maxY = Math.max(maxY, y);
    }
    this.cam.x = (minX + maxX) / 2;
    this.cam.y = (minY + maxY) / 2;
    const w = maxX - minX || 1;
    const h = maxY - minY || 1;
    this.cam.scale = 0.9 * Math.min(this.canvas.width / w, this.canvas.height / h);
  }

  private toScreen([x, y]: [number, number]): [number, number] {
    return [
      (x - this.cam.x) * this.cam.scale + this.canvas.width / 2,
      (y - this.cam.y) * this.cam.scale + this.canvas.height / 2,
    ];
  }

  private onWheel(e: WheelEvent) {
    e.preventDefault();
    const factor = e.deltaY < 0 ? 1.15 : 1 / 1.15;
    this.cam.scale *= factor;
    this.draw();
  }

  /** nearest drawn vertex within PICK_RADIUS pixels, else null */
  pick(sx: number, sy: number): number | null {
    let best: number | null = null;
    let bestD = PICK_RADIUS * PICK_RADIUS;
    for (const v of this.vm.drawnVertices) {
      const [x, y] = this.toScreen(this.vm.arena.layout[v]);
      const d = (x - sx) ** 2 + (y - sy) ** 2;
      if (d < bestD) {
        bestD = d;
        best = v;
      }
    }
    return best;
  }

  draw() {
    const ctx = this.canvas.getContext('2d');
    if (!ctx) return;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);

    for (const arc of this.vm.arcs) {
      ctx.strokeStyle = ARC_COLORS[arc.style];
      ctx.lineWidth = 1;
      ctx.beginPath();
      ctx.moveTo(...this.toScreen(arc.from));
      ctx.lineTo(...this.toScreen(arc.to));
      ctx.stroke();
    }

    ctx.strokeStyle = ARC_COLORS.green;
    for (const poly of this.vm.greenPolylines) {
      ctx.lineWidth = 1.5;
      ctx.beginPath();
      ctx.moveTo(...this.toScreen(poly.points[0]));
      for (const p of poly.points.slice(1)) ctx.lineTo(...this.toScreen(p));
      ctx.stroke();
      for (const t of poly.ticks) {
        const [x, y] = this.toScreen(t);
        ctx.beginPath();
        ctx.moveTo(x - 2, y - 2);
        ctx.lineTo(x + 2, y + 2);
        ctx.stroke();
      }
    }

    ctx.fillStyle = '#495057';
    for (const v of this.vm.drawnVertices) {
      const [x, y] = this.toScreen(this.vm.arena.layout[v]);
      ctx.beginPath();
      ctx.arc(x, y, VERTEX_RADIUS, 0, 2 * Math.PI);
      ctx.fill();
    }

    // legal-move highlights for the selected cop
    if (this.stager.selected !== null) {
      ctx.fillStyle = '#ffd43b';
      for (const v of this.vm.legalFor(this.stager.selected)) {
        const [x, y] = this.toScreen(this.vm.arena.layout[v]);
        ctx.beginPath();
        ctx.arc(x, y, TOKEN_RADIUS - 2, 0, 2 * Math.PI);
        ctx.fill();
      }
    }

    for (const token of this.vm.copTokens()) {
      this.drawToken(ctx, token);
    }

    const robber = this.vm.robberAt();
    if (robber) {
      const [x, y] = this.toScreen(robber);
      ctx.fillStyle = '#e03131';
      ctx.beginPath();
      ctx.arc(x, y, TOKEN_RADIUS, 0, 2 * Math.PI);
      ctx.fill();
    }
  }

  private drawToken(ctx: CanvasRenderingContext2D, token: CopToken) {
    const staged = this.stager.stagedFor(token.index);
    const at = staged !== undefined ? this.vm.arena.layout[staged] : token.at;
    const [x, y] = this.toScreen(at);
    ctx.fillStyle = staged !== undefined ? '#748ffc' : '#1864ab';
    ctx.beginPath();
    ctx.arc(x, y, TOKEN_RADIUS, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = '#fff';
    ctx.font = '9px sans-serif';
    ctx.textAlign = 'center';
    ctx.textBaseline = 'middle';
    let label = String(token.index + 1);
    if (token.transit) label += ` ${Math.round(token.transit.progress * 100)}%`;
    ctx.fillText(label, x, y);
  }
}
