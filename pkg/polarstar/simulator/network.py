"""Cycle-driven flit-level network model.

Every router is a single-cycle input-queued crossbar. Each network input
port holds one FIFO per virtual channel, sized buffer_depth / num_vcs
flits, with credit-based backpressure toward the upstream router. Packets
move wormhole style: the head flit allocates an output VC that the packet
holds until its tail leaves. Per cycle:

1. endpoints generate packets (Bernoulli, load / packet_size per cycle);
2. every endpoint moves at most one flit into its injection buffer;
3. routers compute routes and allocate VCs for waiting head flits, then
   allocate the switch round robin, at most one flit per input port and
   per output port;
4. forwarded flits reach the next buffer at the start of the next cycle
   and freed buffer slots return their credits at the end of this one.

Offered load counts the flits generated during the measurement window and
accepted throughput the flits ejected during it, both per active endpoint
per cycle. Tagged packets only feed the latency and hop statistics.
"""

import logging
from collections import deque
from dataclasses import asdict, dataclass
from typing import Deque, List, Optional, Tuple

import numpy as np

from polarstar.config import SimConfig, load_defaults, normalise_scheme
from polarstar.exceptions import InvalidParameters, NoRoute, VCDeadlockDetected
from polarstar.simulator.routing import (
    RoutingScheme,
    RoutingTable,
    choose_least_occupied,
    choose_min,
    ugal_intermediate,
)
from polarstar.simulator.topology import Topology, VCPolicy
from polarstar.simulator.traffic import TrafficKind, TrafficPattern

logger = logging.getLogger("polarstar")


class Packet:
    __slots__ = (
        "pid",
        "src",
        "dst",
        "dst_router",
        "size",
        "created",
        "tagged",
        "intermediate",
        "decided",
        "hops",
        "globals",
        "vc",
    )

    def __init__(self, pid, src, dst, dst_router, size, created, tagged):
        self.pid = pid
        self.src = src
        self.dst = dst
        self.dst_router = dst_router
        self.size = size
        self.created = created
        self.tagged = tagged
        self.intermediate: Optional[int] = None
        self.decided = False
        self.hops = 0
        self.globals = 0
        self.vc = -1


class Flit:
    __slots__ = ("packet", "head", "tail")

    def __init__(self, packet: Packet, head: bool, tail: bool):
        self.packet = packet
        self.head = head
        self.tail = tail


@dataclass(frozen=True)
class SimReport:
    topology: str
    pattern: str
    scheme: str
    load: float
    seed: int
    latency: float
    latency_first_half: float
    latency_second_half: float
    throughput: float
    offered: float
    average_hops: float
    tagged_packets: int
    delivered_tagged: int
    saturated: bool
    cycles: int
    vc_occupancy: Tuple[float, ...]

    def as_row(self) -> dict:
        row = asdict(self)
        row["vc_occupancy"] = " ".join(f"{x:.4f}" for x in self.vc_occupancy)
        return row


class Network:
    def __init__(
        self,
        topology: Topology,
        config: SimConfig,
        pattern,
        scheme,
    ):
        self.topology = topology
        self.config = config
        if not isinstance(scheme, RoutingScheme):
            scheme = RoutingScheme(normalise_scheme(scheme))
        self.scheme = scheme
        traffic_seed, routing_seed = np.random.SeedSequence(config.seed).spawn(2)
        self.traffic_rng = np.random.default_rng(traffic_seed)
        self.routing_rng = np.random.default_rng(routing_seed)
        self.pattern = TrafficPattern(pattern, topology, self.traffic_rng)

        self.num_vcs = config.num_vcs
        if topology.vc_policy is VCPolicy.GROUP:
            vcs = load_defaults()["routing"]["dragonfly_vcs"]
            self.num_vcs = vcs["adaptive" if self.scheme is RoutingScheme.UGAL else "minimal"]
        self.vc_depth = config.buffer_depth // self.num_vcs
        if self.vc_depth < 1:
            raise InvalidParameters("buffer_depth leaves no room per virtual channel")

        adversarial = self.pattern.kind is TrafficKind.AdversarialSupernode
        self.table = RoutingTable(topology, max_global=adversarial)
        self._check_vc_budget()
        self._build_state()

    def _check_vc_budget(self) -> None:
        t = self.topology
        hosts = list(t.endpoint_routers)
        sub = self.table.hops[np.ix_(hosts, hosts)]
        if (sub < 0).any():
            raise NoRoute(f"{t.name} does not connect every endpoint router")
        if t.vc_policy is VCPolicy.HOP and int(sub.max()) > self.num_vcs:
            raise InvalidParameters(
                f"{t.name} needs {int(sub.max())} hop-indexed VCs, only {self.num_vcs} configured"
            )

    def _build_state(self) -> None:
        t = self.topology
        n = t.num_routers
        adj = t.graph.adjacency
        self.adjacency = adj
        self.port_of = [{u: j for j, u in enumerate(adj[v])} for v in range(n)]
        self.num_net_ports = [len(adj[v]) for v in range(n)]
        # inputs: network ports first, then one injection buffer per local endpoint
        self.inputs: List[List[List[Deque[Flit]]]] = []
        self.routes: List[List[List[Optional[Tuple[int, int]]]]] = []
        for v in range(n):
            ins = [[deque() for _ in range(self.num_vcs)] for _ in adj[v]]
            ins += [[deque()] for _ in t.router_endpoints(v)]
            self.inputs.append(ins)
            self.routes.append([[None] * len(port) for port in ins])
        self.credits = [[[self.vc_depth] * self.num_vcs for _ in adj[v]] for v in range(n)]
        self.owned = [[[False] * self.num_vcs for _ in adj[v]] for v in range(n)]
        self.rr_port = [0] * n
        self.source_queues: List[Deque[Flit]] = [deque() for _ in range(t.num_endpoints)]
        self.transit: List[Tuple[int, int, int, Flit]] = []
        self.credit_returns: List[Tuple[int, int, int]] = []
        self.vc_load = [0] * self.num_vcs
        self.num_vc_buffers = max(1, sum(self.num_net_ports))

        self.cycle = 0
        self.next_pid = 0
        self.generated_flits = 0
        self.ejected_flits = 0
        self.last_progress = 0
        self.tagged_total = 0
        self.tagged_delivered = 0
        self.window_flits_ejected = 0
        self.tagged_generated_flits = 0
        self.latencies_first: List[int] = []
        self.latencies_second: List[int] = []
        self.tagged_hops: List[int] = []
        self.occupancy_samples = np.zeros(self.num_vcs)
        self.occupancy_count = 0

    @property
    def measure_start(self) -> int:
        return self.config.warmup_cycles

    @property
    def measure_end(self) -> int:
        return self.config.warmup_cycles + self.config.measure_cycles

    def flits_in_flight(self) -> int:
        queued = sum(len(q) for q in self.source_queues)
        buffered = sum(len(vc) for ins in self.inputs for port in ins for vc in port)
        return queued + buffered + len(self.transit)

    def check_conservation(self) -> bool:
        return self.generated_flits == self.ejected_flits + self.flits_in_flight()

    def port_occupancy(self, v: int, port: int) -> int:
        return self.vc_depth * self.num_vcs - sum(self.credits[v][port])

    def _generate(self) -> None:
        cfg = self.config
        rate = cfg.load / cfg.packet_size
        active = self.pattern.active
        fire = active[self.traffic_rng.random(len(active)) < rate]
        tagged = self.measure_start <= self.cycle < self.measure_end
        for ep in fire:
            ep = int(ep)
            dst = self.pattern.destination(ep, self.traffic_rng)
            pkt = Packet(
                self.next_pid,
                ep,
                dst,
                int(self.topology.endpoint_router[dst]),
                cfg.packet_size,
                self.cycle,
                tagged,
            )
            self.next_pid += 1
            q = self.source_queues[ep]
            for i in range(cfg.packet_size):
                q.append(Flit(pkt, i == 0, i == cfg.packet_size - 1))
            self.generated_flits += cfg.packet_size
            if tagged:
                self.tagged_total += 1
                self.tagged_generated_flits += cfg.packet_size

    def _inject(self) -> None:
        t = self.topology
        for ep, q in enumerate(self.source_queues):
            if not q:
                continue
            router = int(t.endpoint_router[ep])
            buf = self.inputs[router][self.num_net_ports[router] + t.local_index(ep)][0]
            if len(buf) < self.vc_depth:
                buf.append(q.popleft())

    def _target(self, v: int, pkt: Packet) -> int:
        if pkt.intermediate is not None and pkt.intermediate == v:
            pkt.intermediate = None
        return pkt.dst_router if pkt.intermediate is None else pkt.intermediate

    def _remaining_hops(self, u: int, target: int, pkt: Packet) -> int:
        hops = self.table.hops
        rest = int(hops[u, target])
        if pkt.intermediate is not None:
            rest += int(hops[pkt.intermediate, pkt.dst_router])
        return rest

    def _allocate(self, v: int, pkt: Packet) -> Optional[Tuple[int, int]]:
        """Route and VC allocation for a head flit waiting at router v."""
        if not pkt.decided:
            pkt.decided = True
            if self.scheme is RoutingScheme.UGAL and v != pkt.dst_router:
                cfg = self.config
                pkt.intermediate = ugal_intermediate(
                    self.table,
                    v,
                    pkt.dst_router,
                    lambda u: self.port_occupancy(v, self.port_of[v][u]),
                    cfg.ugal_threshold * cfg.buffer_depth,
                    cfg.ugal_samples,
                    self.num_vcs,
                    self.routing_rng,
                )
        target = self._target(v, pkt)
        if target == v:
            return (-1 - self.topology.local_index(pkt.dst), 0)
        candidates = self.table.next_hops(v, target)
        if self.scheme is RoutingScheme.MIN:
            u = choose_min(candidates)
        else:
            u = choose_least_occupied(
                candidates, lambda w: self.port_occupancy(v, self.port_of[v][w])
            )
        port = self.port_of[v][u]
        is_global = self.topology.is_global(v, u)
        if self.topology.vc_policy is VCPolicy.GROUP:
            choices = [pkt.globals + int(is_global)]
        else:
            remaining = 1 + self._remaining_hops(u, target, pkt)
            choices = range(pkt.vc + 1, self.num_vcs - remaining + 1)
        best = None
        for vc in choices:
            if vc >= self.num_vcs or self.owned[v][port][vc]:
                continue
            if best is None or self.credits[v][port][vc] > self.credits[v][port][best]:
                best = vc
        if best is None:
            return None
        self.owned[v][port][best] = True
        pkt.vc = best
        pkt.hops += 1
        pkt.globals += int(is_global)
        return (port, best)

    def _route_and_switch(self, v: int) -> bool:
        ins = self.inputs[v]
        routes = self.routes[v]
        n_in = len(ins)
        used_out = set()
        moved = False
        start = self.rr_port[v]
        self.rr_port[v] = (start + 1) % n_in if n_in else 0
        for k in range(n_in):
            j = (start + k) % n_in
            port_vcs = ins[j]
            n_vc = len(port_vcs)
            for s in range(n_vc):
                vc = (start + s) % n_vc
                buf = port_vcs[vc]
                if not buf:
                    continue
                flit = buf[0]
                route = routes[j][vc]
                if route is None:
                    if not flit.head:
                        continue
                    route = self._allocate(v, flit.packet)
                    if route is None:
                        continue
                    routes[j][vc] = route
                out, out_vc = route
                if out in used_out:
                    continue
                if out >= 0 and self.credits[v][out][out_vc] <= 0:
                    continue
                buf.popleft()
                used_out.add(out)
                moved = True
                if j < self.num_net_ports[v]:
                    u = self.adjacency[v][j]
                    self.credit_returns.append((u, self.port_of[u][v], vc))
                    self.vc_load[vc] -= 1
                if flit.tail:
                    routes[j][vc] = None
                if out >= 0:
                    self.credits[v][out][out_vc] -= 1
                    if flit.tail:
                        self.owned[v][out][out_vc] = False
                    u = self.adjacency[v][out]
                    self.transit.append((u, self.port_of[u][v], out_vc, flit))
                else:
                    self._eject(flit)
                break
        return moved

    def _eject(self, flit: Flit) -> None:
        self.ejected_flits += 1
        pkt = flit.packet
        if self.measure_start <= self.cycle < self.measure_end:
            self.window_flits_ejected += 1
        if not flit.tail or not pkt.tagged:
            return
        latency = self.cycle + 1 - pkt.created
        self.tagged_delivered += 1
        self.tagged_hops.append(pkt.hops)
        half = self.measure_start + self.config.measure_cycles // 2
        (self.latencies_first if pkt.created < half else self.latencies_second).append(latency)

    def step(self) -> None:
        self._generate()
        self._inject()
        moved = False
        for v in range(self.topology.num_routers):
            moved |= self._route_and_switch(v)
        for u, port, vc, flit in self.transit:
            self.inputs[u][port][vc].append(flit)
            self.vc_load[vc] += 1
        self.transit = []
        for u, port, vc in self.credit_returns:
            self.credits[u][port][vc] += 1
        self.credit_returns = []
        if self.measure_start <= self.cycle < self.measure_end:
            self.occupancy_samples += np.asarray(self.vc_load) / self.num_vc_buffers
            self.occupancy_count += 1
        if moved or self.flits_outstanding() == 0:
            self.last_progress = self.cycle
        elif self.cycle - self.last_progress > self.config.watchdog_cycles:
            raise VCDeadlockDetected(
                f"no flit moved for {self.config.watchdog_cycles} cycles on {self.topology.name}"
            )
        self.cycle += 1

    def flits_outstanding(self) -> int:
        return self.generated_flits - self.ejected_flits

    def run(self) -> SimReport:
        cfg = self.config
        while self.cycle < self.measure_end:
            self.step()
        limit = self.measure_end + cfg.drain_cycles
        while self.tagged_delivered < self.tagged_total and self.cycle < limit:
            self.step()
        return self.report()

    def report(self) -> SimReport:
        cfg = self.config
        first = float(np.mean(self.latencies_first)) if self.latencies_first else 0.0
        second = float(np.mean(self.latencies_second)) if self.latencies_second else 0.0
        every = self.latencies_first + self.latencies_second
        latency = float(np.mean(every)) if every else 0.0
        endpoints = len(self.pattern.active)
        window = cfg.measure_cycles * endpoints
        undrained = self.tagged_delivered < self.tagged_total
        growth = bool(first and second > first * (1 + cfg.saturation_growth))
        saturated = undrained or growth
        if saturated:
            logger.warning(
                "%s %s %s saturated at load %.3f (latency %.1f -> %.1f, %d undelivered)",
                self.topology.name,
                self.pattern.kind.value,
                self.scheme.value,
                cfg.load,
                first,
                second,
                self.tagged_total - self.tagged_delivered,
            )
        occupancy = self.occupancy_samples / max(1, self.occupancy_count)
        return SimReport(
            topology=self.topology.name,
            pattern=self.pattern.kind.value,
            scheme=self.scheme.value,
            load=cfg.load,
            seed=cfg.seed,
            latency=latency,
            latency_first_half=first,
            latency_second_half=second,
            throughput=self.window_flits_ejected / window if window else 0.0,
            offered=self.tagged_generated_flits / window if window else 0.0,
            average_hops=float(np.mean(self.tagged_hops)) if self.tagged_hops else 0.0,
            tagged_packets=self.tagged_total,
            delivered_tagged=self.tagged_delivered,
            saturated=saturated,
            cycles=self.cycle,
            vc_occupancy=tuple(round(float(x), 6) for x in occupancy),
        )


def simulate(topology: Topology, config: SimConfig, pattern="Uniform", scheme="MIN") -> SimReport:
    """Run one (topology, pattern, scheme, load) point to completion."""
    network = Network(topology, config, pattern, scheme)
    report = network.run()
    logger.info(
        "%s %s %s load %.3f: latency %.2f, throughput %.4f",
        report.topology,
        report.pattern,
        report.scheme,
        report.load,
        report.latency,
        report.throughput,
    )
    return report
