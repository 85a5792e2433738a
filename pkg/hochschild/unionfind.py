class UnionFind:
    """Union-find with path compression, used to count connected components."""

    def __init__(self, size: int) -> None:
        self.size = size
        # initially all elements disconnected
        self.parents = list(range(size))
        self.num_components = size

    def find_parent(self, elem: int) -> int:
        p = elem
        while p != self.parents[p]:
            p = self.parents[p]

        # compress the path so every visited element points at the root
        while elem != p:
            self.parents[elem], elem = p, self.parents[elem]

        return p

    def union(self, a: int, b: int) -> None:
        p1 = self.find_parent(a)
        p2 = self.find_parent(b)
        if p1 == p2:
            return
        # keep the smaller index as root so components come out in a stable order
        if p2 < p1:
            p1, p2 = p2, p1
        self.parents[p2] = p1
        self.num_components -= 1

    def retrieve_components(self) -> list[list[int]]:
        components: dict[int, list[int]] = {}
        for i in range(self.size):
            components.setdefault(self.find_parent(i), []).append(i)
        return sorted(components.values(), key=lambda c: c[0])
