"""
Módulo app - Casos de uso e camada de aplicação.

Este módulo contém os serviços de aplicação (casos de uso), as suítes de
verificação, o logger de operações e a camada de infraestrutura para
arquivos de campo, medidas, células e relatórios.
"""
