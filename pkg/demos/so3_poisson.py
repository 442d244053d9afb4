"""The Lie-Poisson structure on so(3)*: Poisson condition, brackets, Casimir."""
from gradedpoisson import Chart, fn_bracket, is_poisson, poisson_bracket, sharp
from gradedpoisson.brackets import differential

c = Chart(3)
x, xi = c.x, c.xi
pi = x(3) * xi(1) * xi(2) + x(1) * xi(2) * xi(3) + x(2) * xi(3) * xi(1)
print("pi =", pi)
print("[pi, pi] =", poisson_bracket(pi, pi))
print("Poisson:", is_poisson(pi))

for i, j in ((1, 2), (2, 3), (3, 1)):
    print(f"{{x{i}, x{j}}} =", fn_bracket(pi, x(i), x(j)))

casimir = x(1) ** 2 + x(2) ** 2 + x(3) ** 2
print("sharp d(|x|^2) =", sharp(pi, differential(casimir)))
