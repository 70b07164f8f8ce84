package shop;

public class CookBookPanel {
}
